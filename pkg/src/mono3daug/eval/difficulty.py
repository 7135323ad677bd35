"""Ground-truth difficulty stratification.

Thresholds follow the KITTI benchmark convention: a label is counted at a
difficulty iff its 2D box is tall enough and its occlusion/truncation are
low enough; everything else (including DontCare regions) is ignored -
ignored labels can absorb detections without counting as TP or FN.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from mono3daug.core.types import ObjectLabel


class DifficultyRule(NamedTuple):
    name: str
    min_box_height: float
    max_occlusion: int
    max_truncation: float


EASY = DifficultyRule("easy", 40.0, 0, 0.15)
MODERATE = DifficultyRule("moderate", 25.0, 1, 0.30)
HARD = DifficultyRule("hard", 25.0, 2, 0.50)

KITTI_DIFFICULTIES = (EASY, MODERATE, HARD)


def validate_rules(rules: Iterable[DifficultyRule]) -> None:
    """Ordered rules must be monotonically more permissive."""
    rules = list(rules)
    for prev, cur in zip(rules, rules[1:]):
        if (
            cur.min_box_height > prev.min_box_height
            or cur.max_occlusion < prev.max_occlusion
            or cur.max_truncation < prev.max_truncation
        ):
            raise ValueError(
                f"difficulty {cur.name!r} is stricter than {prev.name!r}; "
                "rules must be ordered from strictest to most permissive"
            )


def difficulty_filter(
    labels: Iterable[ObjectLabel], rule: DifficultyRule
) -> tuple[list[ObjectLabel], list[ObjectLabel]]:
    """Partition labels into (counted, ignored) under a difficulty rule."""
    counted = []
    ignored = []
    for lab in labels:
        if (
            not lab.is_dontcare
            and lab.box_height >= rule.min_box_height
            and lab.occlusion <= rule.max_occlusion
            and lab.truncation <= rule.max_truncation
        ):
            counted.append(lab)
        else:
            ignored.append(lab)
    return counted, ignored
