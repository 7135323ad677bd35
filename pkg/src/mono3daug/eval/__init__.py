from mono3daug.eval.ap import (
    INTERP_MODES,
    R11,
    R40,
    PRCurve,
    average_precision,
    interpolated_precision,
    pr_curve,
    recall_grid,
)
from mono3daug.eval.difficulty import (
    KITTI_DIFFICULTIES,
    DifficultyRule,
    difficulty_filter,
    validate_rules,
)
from mono3daug.eval.matching import MatchStatus, match_detections, sort_by_score
from mono3daug.eval.metrics import (
    CLASSES,
    class_frequencies,
    icfw_map,
    icfw_weights,
    mean_ap,
)
from mono3daug.eval.report import (
    DEFAULT_THRESHOLDS,
    METRIC_3D,
    METRIC_BEV,
    METRICS,
    ApCell,
    EvalReport,
    evaluate,
    evaluate_dirs,
    load_label_dir,
)

__all__ = [
    "ApCell",
    "CLASSES",
    "DEFAULT_THRESHOLDS",
    "DifficultyRule",
    "EvalReport",
    "INTERP_MODES",
    "KITTI_DIFFICULTIES",
    "MatchStatus",
    "METRICS",
    "METRIC_3D",
    "METRIC_BEV",
    "PRCurve",
    "R11",
    "R40",
    "average_precision",
    "class_frequencies",
    "difficulty_filter",
    "evaluate",
    "evaluate_dirs",
    "icfw_map",
    "icfw_weights",
    "interpolated_precision",
    "load_label_dir",
    "match_detections",
    "mean_ap",
    "pr_curve",
    "recall_grid",
    "sort_by_score",
    "validate_rules",
]
