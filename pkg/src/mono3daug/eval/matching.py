"""Greedy score-ordered matching of detections to ground truth.

Predictions are processed in descending score order (ties keep input
order).  Each prediction claims the highest-IoU unmatched counted GT at or
above the threshold (a true positive); failing that, the highest-IoU
unmatched ignored GT at or above the threshold absorbs it (neither TP nor
FP); otherwise it is a false positive.  Every GT is matched at most once.
Unmatched counted GTs are the false negatives.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Sequence

from mono3daug.core.types import ObjectLabel
from mono3daug.errors import MissingScore

IouFn = Callable[[ObjectLabel, ObjectLabel], float]


class MatchStatus(str, Enum):
    TP = "tp"
    FP = "fp"
    IGNORED = "ignored"


def sort_by_score(preds: Sequence[ObjectLabel]) -> list[ObjectLabel]:
    for pred in preds:
        if pred.score is None:
            raise MissingScore(f"prediction for class {pred.class_name!r} has no score")
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].score, i))
    return [preds[i] for i in order]


def _best_candidate(pred, gts, taken, iou_fn, threshold):
    best_idx = -1
    best_iou = 0.0
    for i, gt in enumerate(gts):
        if taken[i]:
            continue
        overlap = iou_fn(pred, gt)
        if overlap >= threshold and overlap > best_iou:
            best_idx, best_iou = i, overlap
    return best_idx


def match_detections(
    counted: Sequence[ObjectLabel],
    ignored: Sequence[ObjectLabel],
    preds: Sequence[ObjectLabel],
    iou_fn: IouFn,
    threshold: float,
) -> tuple[list[tuple[ObjectLabel, MatchStatus]], int]:
    """Match one frame; returns score-ordered (pred, status) plus FN count."""
    ranked = sort_by_score(preds)
    counted_taken = [False] * len(counted)
    ignored_taken = [False] * len(ignored)
    results = []
    for pred in ranked:
        idx = _best_candidate(pred, counted, counted_taken, iou_fn, threshold)
        if idx >= 0:
            counted_taken[idx] = True
            results.append((pred, MatchStatus.TP))
            continue
        idx = _best_candidate(pred, ignored, ignored_taken, iou_fn, threshold)
        if idx >= 0:
            ignored_taken[idx] = True
            results.append((pred, MatchStatus.IGNORED))
            continue
        results.append((pred, MatchStatus.FP))
    fn_count = counted_taken.count(False)
    return results, fn_count
