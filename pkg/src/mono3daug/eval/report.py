"""End-to-end detection scoring and the report it produces.

For every (class, difficulty, metric, IoU threshold) cell the evaluator
pools score-sorted match results across all frames, accumulates one
precision-recall curve, and interpolates AP.  Summary rows add the
unweighted mAP and the inverse-class-frequency-weighted mAP per
(difficulty, metric); the weights come from the ground-truth split itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from mono3daug.core.types import ObjectLabel
from mono3daug.errors import EmptySplit, IdMismatch, ZeroFrequency
from mono3daug.eval.ap import R40, average_precision
from mono3daug.eval.difficulty import KITTI_DIFFICULTIES, DifficultyRule, difficulty_filter
from mono3daug.eval.matching import match_detections
from mono3daug.eval.metrics import CLASSES, class_frequencies, icfw_map, icfw_weights, mean_ap
from mono3daug.geometry import iou_2d_labels, iou_3d_labels, iou_bev_labels
from mono3daug.kitti_io.labels import read_label_file

METRIC_3D = "3d"
METRIC_BEV = "bev"
METRICS = (METRIC_3D, METRIC_BEV)

# IoU thresholds per class: 0.7 for cars, 0.25 for pedestrians and cyclists.
DEFAULT_THRESHOLDS = {"Car": 0.7, "Pedestrian": 0.25, "Cyclist": 0.25}

_METRIC_IOU = {METRIC_3D: iou_3d_labels, METRIC_BEV: iou_bev_labels}


def _metric_iou_fn(metric: str):
    base = _METRIC_IOU[metric]

    def iou_fn(pred: ObjectLabel, gt: ObjectLabel) -> float:
        # DontCare regions carry no usable 3D geometry; absorption against
        # them is judged on the image-plane boxes.
        if gt.is_dontcare:
            return iou_2d_labels(pred, gt)
        return base(pred, gt)

    return iou_fn


@dataclass(frozen=True)
class ApCell:
    ap: float
    num_gt: int
    threshold: float

    @property
    def defined(self) -> bool:
        return self.num_gt > 0


@dataclass
class EvalReport:
    interp: str
    classes: tuple[str, ...]
    difficulties: tuple[str, ...]
    metrics: tuple[str, ...]
    thresholds: dict[str, float]
    cells: dict[tuple[str, str, str], ApCell] = field(default_factory=dict)
    maps: dict[tuple[str, str], float] = field(default_factory=dict)
    icfw_maps: dict[tuple[str, str], float | None] = field(default_factory=dict)
    frequencies: dict[str, dict[str, float] | None] = field(default_factory=dict)
    weights: dict[str, dict[str, float] | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def ap(self, class_name: str, difficulty: str, metric: str) -> float:
        return self.cells[(class_name, difficulty, metric)].ap

    def recompute_summary(self, difficulty: str, metric: str) -> tuple[float, float | None]:
        """Re-derive (mAP, ICFW mAP) from the stored per-class cells."""
        aps = {c: self.ap(c, difficulty, metric) for c in self.classes}
        weights = self.weights.get(difficulty)
        weighted = icfw_map(aps, weights, self.classes) if weights else None
        return mean_ap(aps, self.classes), weighted

    def to_records(self) -> list[dict]:
        records = []
        for (cls, diff, metric), cell in sorted(self.cells.items()):
            records.append(
                {
                    "kind": "ap",
                    "class": cls,
                    "difficulty": diff,
                    "metric": metric,
                    "iou": cell.threshold,
                    "interp": self.interp,
                    "ap": cell.ap,
                    "num_gt": cell.num_gt,
                    "defined": cell.defined,
                }
            )
        for (diff, metric), value in sorted(self.maps.items()):
            records.append(
                {
                    "kind": "map",
                    "difficulty": diff,
                    "metric": metric,
                    "interp": self.interp,
                    "iou": {c: self.thresholds[c] for c in self.classes},
                    "value": value,
                }
            )
        for (diff, metric), value in sorted(self.icfw_maps.items()):
            records.append(
                {
                    "kind": "icfw_map",
                    "difficulty": diff,
                    "metric": metric,
                    "interp": self.interp,
                    "iou": {c: self.thresholds[c] for c in self.classes},
                    "value": value,
                }
            )
        for diff in self.difficulties:
            freq = self.frequencies.get(diff)
            weights = self.weights.get(diff)
            records.append(
                {
                    "kind": "class_stats",
                    "difficulty": diff,
                    "frequencies": freq,
                    "weights": weights,
                }
            )
        return records

    def to_json(self) -> str:
        return json.dumps({"records": self.to_records(), "notes": self.notes}, indent=2)

    def to_text(self) -> str:
        def pct(value: float | None) -> str:
            return "    n/a" if value is None else f"{100.0 * value:7.2f}"

        lines = []
        for metric in self.metrics:
            lines.append(f"AP_{metric} (%, {self.interp})")
            header = f"  {'class':<12}{'iou':>5}" + "".join(
                f"{d:>10}" for d in self.difficulties
            )
            lines.append(header)
            for cls in self.classes:
                row = f"  {cls:<12}{self.thresholds[cls]:>5.2f}"
                for diff in self.difficulties:
                    cell = self.cells[(cls, diff, metric)]
                    row += f"   {pct(cell.ap)}" + ("*" if not cell.defined else " ")
                lines.append(row)
            row = f"  {'mAP':<17}"
            for diff in self.difficulties:
                row += f"   {pct(self.maps[(diff, metric)])} "
            lines.append(row)
            row = f"  {'ICFW mAP':<17}"
            for diff in self.difficulties:
                row += f"   {pct(self.icfw_maps[(diff, metric)])} "
            lines.append(row)
            lines.append("")
        if any(freq is None for freq in self.frequencies.values()) or self.notes:
            lines.extend(f"note: {n}" for n in self.notes)
        lines.append("(* AP reported as 0: no counted ground truth)")
        return "\n".join(lines)


def evaluate(
    gt_by_id: Mapping[str, Sequence[ObjectLabel]],
    preds_by_id: Mapping[str, Sequence[ObjectLabel]],
    *,
    class_thresholds: Mapping[str, float] | None = None,
    rules: Sequence[DifficultyRule] = KITTI_DIFFICULTIES,
    metrics: Sequence[str] = METRICS,
    interp: str = R40,
    classes: Sequence[str] = CLASSES,
) -> EvalReport:
    """Score predictions against ground truth over a whole split.

    ``gt_by_id`` and ``preds_by_id`` must cover exactly the same frame ids;
    predictions must carry scores.
    """
    gt_ids = sorted(gt_by_id)
    missing = sorted(set(gt_ids) - set(preds_by_id))
    extra = sorted(set(preds_by_id) - set(gt_ids))
    if missing or extra:
        raise IdMismatch(
            f"prediction ids do not match ground truth (missing {missing[:5]}, "
            f"unexpected {extra[:5]})"
        )
    thresholds = dict(DEFAULT_THRESHOLDS)
    thresholds.update(class_thresholds or {})
    unknown_metrics = [m for m in metrics if m not in METRICS]
    if unknown_metrics:
        raise ValueError(f"unknown metric(s) {unknown_metrics}; expected {METRICS}")

    report = EvalReport(
        interp=interp,
        classes=tuple(classes),
        difficulties=tuple(r.name for r in rules),
        metrics=tuple(metrics),
        thresholds={c: thresholds[c] for c in classes},
    )

    try:
        report.frequencies = dict(
            class_frequencies((gt_by_id[i] for i in gt_ids), rules, classes)
        )
    except EmptySplit as exc:
        report.frequencies = {r.name: None for r in rules}
        report.notes.append(str(exc))

    for rule in rules:
        partitions = {i: difficulty_filter(gt_by_id[i], rule) for i in gt_ids}

        freq = report.frequencies.get(rule.name)
        weights = None
        if freq is not None:
            try:
                weights = icfw_weights(freq, classes)
            except ZeroFrequency as exc:
                report.notes.append(f"{rule.name}: {exc}")
        report.weights[rule.name] = weights

        for metric in metrics:
            iou_fn = _metric_iou_fn(metric)
            aps = {}
            for cls in classes:
                thr = thresholds[cls]
                pooled = []
                seq = 0
                positives = 0
                fn_total = 0
                for frame_id in gt_ids:
                    counted_all, ignored_all = partitions[frame_id]
                    counted = [l for l in counted_all if l.class_name == cls]
                    ignored = [
                        l for l in ignored_all if l.class_name == cls or l.is_dontcare
                    ]
                    preds = [p for p in preds_by_id[frame_id] if p.class_name == cls]
                    results, fn_count = match_detections(
                        counted, ignored, preds, iou_fn, thr
                    )
                    for pred, status in results:
                        pooled.append((-pred.score, seq, status))
                        seq += 1
                    positives += len(counted)
                    fn_total += fn_count
                pooled.sort()
                statuses = [status for _, _, status in pooled]
                ap = average_precision(statuses, positives, interp)
                aps[cls] = ap
                report.cells[(cls, rule.name, metric)] = ApCell(
                    ap=ap, num_gt=positives, threshold=thr
                )
            report.maps[(rule.name, metric)] = mean_ap(aps, classes)
            report.icfw_maps[(rule.name, metric)] = (
                icfw_map(aps, weights, classes) if weights is not None else None
            )
    return report


def _label_dir(path) -> Path:
    path = Path(path)
    nested = path / "label_2"
    return nested if nested.is_dir() else path


def load_label_dir(path) -> dict[str, list[ObjectLabel]]:
    """Read every ``<id>.txt`` under a directory (or its label_2/ subdir)."""
    directory = _label_dir(path)
    if not directory.is_dir():
        raise IdMismatch(f"label directory not found: {directory}")
    out = {}
    for file in sorted(directory.glob("*.txt")):
        out[file.stem] = read_label_file(file)
    return out


def evaluate_dirs(gt_dir, pred_dir, **kwargs) -> EvalReport:
    gt_by_id = load_label_dir(gt_dir)
    if not gt_by_id:
        raise EmptySplit(f"no ground-truth label files under {gt_dir}")
    preds_by_id = load_label_dir(pred_dir)
    return evaluate(gt_by_id, preds_by_id, **kwargs)
