"""Precision-recall accumulation and interpolated average precision.

AP is the mean of the interpolated precision max_{r' >= r} p(r') sampled on
a fixed recall grid: 40 points {1/40 .. 40/40} (modern protocol, default)
or 11 points {0, 0.1 .. 1.0}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from mono3daug.eval.matching import MatchStatus

R40 = "r40"
R11 = "r11"
INTERP_MODES = (R40, R11)


def recall_grid(mode: str) -> list[float]:
    if mode == R40:
        return [i / 40.0 for i in range(1, 41)]
    if mode == R11:
        return [i / 10.0 for i in range(0, 11)]
    raise ValueError(f"unknown interpolation mode {mode!r}; expected one of {INTERP_MODES}")


@dataclass(frozen=True)
class PRCurve:
    """Cumulative (recall, precision) points over the score-sorted detections."""

    recalls: tuple[float, ...]
    precisions: tuple[float, ...]
    positives: int


def pr_curve(statuses: Sequence[MatchStatus], positives: int) -> PRCurve:
    """Accumulate the curve; ignored detections contribute to neither axis."""
    recalls = []
    precisions = []
    tp = 0
    fp = 0
    for status in statuses:
        if status is MatchStatus.IGNORED:
            continue
        if status is MatchStatus.TP:
            tp += 1
        else:
            fp += 1
        precisions.append(tp / (tp + fp))
        recalls.append(tp / positives if positives > 0 else 0.0)
    return PRCurve(tuple(recalls), tuple(precisions), positives)


def interpolated_precision(curve: PRCurve, recall: float) -> float:
    best = 0.0
    for r, p in zip(curve.recalls, curve.precisions):
        if r >= recall and p > best:
            best = p
    return best


def average_precision(
    statuses: Sequence[MatchStatus], positives: int, mode: str = R40
) -> float:
    """AP over pooled, score-sorted match statuses; 0 when there are no
    counted ground truths (callers flag that case separately)."""
    grid = recall_grid(mode)
    if positives <= 0:
        return 0.0
    curve = pr_curve(statuses, positives)
    return math.fsum(interpolated_precision(curve, r) for r in grid) / len(grid)
