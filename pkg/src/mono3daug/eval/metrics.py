"""Class-aggregate metrics: mAP, class frequencies, and the
inverse-class-frequency-weighted (ICFW) mAP that counters the car class's
dominance in KITTI-style data.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

from mono3daug.core.types import ObjectLabel
from mono3daug.errors import EmptySplit, MissingClass, ZeroFrequency
from mono3daug.eval.difficulty import DifficultyRule, difficulty_filter

CLASSES = ("Car", "Pedestrian", "Cyclist")


def _require_classes(table: Mapping[str, float], classes: Sequence[str], what: str):
    missing = [c for c in classes if c not in table]
    if missing:
        raise MissingClass(f"{what} missing class(es): {missing}")


def mean_ap(aps: Mapping[str, float], classes: Sequence[str] = CLASSES) -> float:
    """Unweighted mean of the per-class APs over the fixed class set."""
    _require_classes(aps, classes, "AP table")
    return math.fsum(aps[c] for c in classes) / len(classes)


def class_frequencies(
    labels_by_frame: Iterable[Sequence[ObjectLabel]],
    rules: Sequence[DifficultyRule],
    classes: Sequence[str] = CLASSES,
) -> dict[str, dict[str, float]]:
    """Relative frequency of each class among counted instances, per difficulty.

    Frequencies are normalized over the given class set only, so they sum to
    1 per difficulty.  Raises EmptySplit if a difficulty has no counted
    instances at all.
    """
    frames = list(labels_by_frame)
    out: dict[str, dict[str, float]] = {}
    for rule in rules:
        counts = {c: 0 for c in classes}
        for labels in frames:
            counted, _ = difficulty_filter(labels, rule)
            for lab in counted:
                if lab.class_name in counts:
                    counts[lab.class_name] += 1
        total = sum(counts.values())
        if total == 0:
            raise EmptySplit(f"no counted instances at difficulty {rule.name!r}")
        out[rule.name] = {c: counts[c] / total for c in classes}
    return out


def icfw_weights(
    frequencies: Mapping[str, float], classes: Sequence[str] = CLASSES
) -> dict[str, float]:
    """Normalized inverse-frequency weights: w_c = (1/f_c) / sum(1/f_c)."""
    _require_classes(frequencies, classes, "frequency table")
    zero = [c for c in classes if frequencies[c] == 0.0]
    if zero:
        raise ZeroFrequency(
            f"inverse-frequency weight undefined for zero-frequency class(es): {zero}"
        )
    inverses = {c: 1.0 / frequencies[c] for c in classes}
    total = math.fsum(inverses.values())
    return {c: inverses[c] / total for c in classes}


def icfw_map(
    aps: Mapping[str, float],
    weights: Mapping[str, float],
    classes: Sequence[str] = CLASSES,
) -> float:
    """Weighted AP sum, normalized by the weight sum.

    Exactly-uniform weights reduce to the plain arithmetic mean through the
    same code path as mean_ap, so the algebraic identity holds bit-exactly.
    """
    _require_classes(aps, classes, "AP table")
    _require_classes(weights, classes, "weight table")
    values = [weights[c] for c in classes]
    if all(v == values[0] for v in values):
        return mean_ap(aps, classes)
    num = math.fsum(weights[c] * aps[c] for c in classes)
    den = math.fsum(values)
    return num / den
