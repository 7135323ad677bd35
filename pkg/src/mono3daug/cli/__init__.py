"""Command-line interface: augment, eval, stats, preview.

Exit codes: 0 success, 1 runtime/data failure, 2 configuration or usage
failure.  Flags override config-file values, which override built-in
defaults; all commands are deterministic under a fixed seed.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from mono3daug.augment import ops
from mono3daug.augment.config import PARTNER_COUNT, op_config
from mono3daug.augment.pipeline import run_pipeline
from mono3daug.cli._config import load_run_config, parse_iou_overrides
from mono3daug.cli._render import render_preview
from mono3daug.core.rng import derive_stream
from mono3daug.errors import (
    ConfigInvalid,
    EmptySplit,
    MissingSample,
    Mono3dAugError,
    UnknownOp,
    ZeroFrequency,
)
from mono3daug.eval.ap import INTERP_MODES, R40
from mono3daug.eval.difficulty import KITTI_DIFFICULTIES
from mono3daug.eval.metrics import CLASSES, class_frequencies, icfw_weights
from mono3daug.eval.report import evaluate_dirs, load_label_dir
from mono3daug.kitti_io.dataset import DatasetIndex, SplitManifest, load_sample

log = logging.getLogger("mono3daug")

EXIT_DATA = 1
EXIT_CONFIG = 2


def _fail(exc: BaseException) -> None:
    code = EXIT_CONFIG if isinstance(exc, ConfigInvalid) else EXIT_DATA
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging.")
def main(verbose: bool) -> None:
    """Deterministic KITTI-format augmentation and detection scoring."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _resolve(flag, config_value, default):
    if flag is not None:
        return flag
    if config_value is not None:
        return config_value
    return default


@main.command("augment")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON run configuration.")
@click.option("--input", "input_dir", type=click.Path(), default=None,
              help="Dataset root (contains image_2/ and label_2/).")
@click.option("--split", "split_path", type=click.Path(), default=None,
              help="Split manifest, one sample id per line (default: all ids).")
@click.option("--output", "output_dir", type=click.Path(), default=None,
              help="Output root; each schedule entry writes its own subtree.")
@click.option("--seed", type=int, default=None, help="Global seed (default 0).")
@click.option("--workers", type=int, default=None, help="Worker threads (default 1).")
def cmd_augment(config_path, input_dir, split_path, output_dir, seed, workers):
    """Materialize the configured augmentation schedule over a split."""
    try:
        cfg = load_run_config(config_path)
        input_dir = _resolve(input_dir, cfg.dataset_root, None)
        output_dir = _resolve(output_dir, cfg.output_root, None)
        split_path = _resolve(split_path, cfg.split, None)
        seed = _resolve(seed, cfg.seed, 0)
        workers = _resolve(workers, cfg.workers, 1)
        if input_dir is None or output_dir is None:
            raise ConfigInvalid("--input and --output are required (flag or config)")
        if workers < 1:
            raise ConfigInvalid(f"--workers must be >= 1, got {workers}")

        index = DatasetIndex.scan(input_dir)
        if split_path is not None:
            manifest = SplitManifest.load(split_path)
            manifest.validate_against(index)
            split_ids = list(manifest.ids)
        else:
            split_ids = list(index.ids)

        summary = run_pipeline(
            index, split_ids, cfg.schedule, seed, output_dir,
            workers=workers, base_config=cfg.defaults,
        )
    except Mono3dAugError as exc:
        _fail(exc)
    click.echo(summary.to_text())
    if not summary.ok:
        sys.exit(EXIT_DATA)


@main.command("eval")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--gt", "gt_dir", type=click.Path(), required=True,
              help="Ground-truth label directory.")
@click.option("--pred", "pred_dir", type=click.Path(), required=True,
              help="Prediction label directory (16-field lines with scores).")
@click.option("--iou", "iou_spec", default=None,
              help="Per-class thresholds, e.g. car=0.7,pedestrian=0.25.")
@click.option("--iou-all", "iou_all", type=float, default=None,
              help="One threshold for every class.")
@click.option("--interp", type=click.Choice(INTERP_MODES), default=None,
              help="Recall interpolation grid (default r40).")
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Also write the machine-readable JSON report here.")
def cmd_eval(config_path, gt_dir, pred_dir, iou_spec, iou_all, interp, report_path):
    """Score predictions: per-class AP plus mAP and ICFW mAP rows."""
    try:
        cfg = load_run_config(config_path)
        thresholds = dict(cfg.eval_iou)
        if cfg.eval_iou_all is not None:
            thresholds = {c: cfg.eval_iou_all for c in CLASSES}
        if iou_all is not None:
            if not 0.0 < iou_all <= 1.0:
                raise ConfigInvalid(f"--iou-all must be in (0, 1], got {iou_all}")
            thresholds = {c: iou_all for c in CLASSES}
        if iou_spec is not None:
            thresholds.update(parse_iou_overrides(iou_spec))
        rules = cfg.eval_difficulties or KITTI_DIFFICULTIES
        report = evaluate_dirs(
            gt_dir,
            pred_dir,
            class_thresholds=thresholds,
            rules=rules,
            interp=_resolve(interp, cfg.eval_interp, R40),
        )
    except Mono3dAugError as exc:
        _fail(exc)
    click.echo(report.to_text())
    if report_path is not None:
        Path(report_path).write_text(report.to_json(), encoding="utf-8")


@main.command("stats")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--labels", "labels_dir", type=click.Path(), required=True,
              help="Ground-truth label directory.")
@click.option("--split", "split_path", type=click.Path(), default=None,
              help="Restrict to these sample ids.")
def cmd_stats(config_path, labels_dir, split_path):
    """Class frequencies and inverse-frequency weights per difficulty."""
    try:
        cfg = load_run_config(config_path)
        split_path = _resolve(split_path, cfg.split, None)
        labels_by_id = load_label_dir(labels_dir)
        if split_path is not None:
            wanted = SplitManifest.load(split_path).ids
            missing = [i for i in wanted if i not in labels_by_id]
            if missing:
                raise EmptySplit(f"split ids without label files: {missing[:5]}")
            labels_by_id = {i: labels_by_id[i] for i in wanted}
        if not labels_by_id:
            raise EmptySplit(f"no label files under {labels_dir}")
        frequencies = class_frequencies(labels_by_id.values(), KITTI_DIFFICULTIES)
    except Mono3dAugError as exc:
        _fail(exc)

    header = f"{'difficulty':<12}" + "".join(f"{c:>22}" for c in CLASSES)
    click.echo(header)
    failed = None
    for rule in KITTI_DIFFICULTIES:
        freq = frequencies[rule.name]
        try:
            weights = icfw_weights(freq)
            cells = [f"{freq[c]:.2f}/{weights[c]:.2f}" for c in CLASSES]
        except ZeroFrequency as exc:
            failed = exc
            cells = [f"{freq[c]:.2f}/ n/a" for c in CLASSES]
        click.echo(f"{rule.name:<12}" + "".join(f"{cell:>22}" for cell in cells))
    click.echo("(cells are frequency/weight)")
    if failed is not None:
        _fail(failed)


@main.command("preview")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--input", "input_dir", type=click.Path(), required=True)
@click.option("--sample", "sample_id", required=True, help="Sample id, e.g. 000003.")
@click.option("--op", "op_name", required=True,
              help="cutout | photometric | box-mixup | box-cut-paste | mosaic-tile")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_preview(config_path, input_dir, sample_id, op_name, seed, out_path):
    """Render an original|augmented side-by-side PNG with box overlays."""
    try:
        cfg = load_run_config(config_path)
        seed = _resolve(seed, cfg.seed, 0)
        if op_name not in PARTNER_COUNT:
            raise UnknownOp(
                f"unknown op {op_name!r}; expected one of {sorted(PARTNER_COUNT)}"
            )
        index = DatasetIndex.scan(input_dir)
        if sample_id not in index:
            raise MissingSample(f"sample {sample_id!r} not found under {input_dir}")
        ordinal = index.ids.index(sample_id)
        rng = derive_stream(seed, [0, ordinal])
        sample = load_sample(index, sample_id)

        needed = PARTNER_COUNT[op_name]
        partners = []
        if needed:
            pool = len(index.ids) - 1
            if pool < 1:
                raise MissingSample(f"{op_name} needs partner samples; index has 1 id")
            for _ in range(needed):
                j = rng.randint(pool)
                if j >= ordinal:
                    j += 1
                partners.append(load_sample(index, index.ids[j]))

        op_cfg = op_config(cfg.defaults, op_name)
        if op_name == "cutout":
            augmented = ops.cutout(sample, op_cfg, rng)
        elif op_name == "photometric":
            augmented = ops.photometric(sample, op_cfg, rng)
        elif op_name == "box-mixup":
            augmented = ops.box_mixup(sample, partners[0], op_cfg, rng)
        elif op_name == "box-cut-paste":
            augmented = ops.box_cut_paste(sample, partners[0], op_cfg, rng)
        else:
            augmented = ops.mosaic_tile([sample, *partners], op_cfg, rng)

        canvas = render_preview(sample, augmented)
        Image.fromarray(np.ascontiguousarray(canvas)).save(out_path, format="PNG")
    except Mono3dAugError as exc:
        _fail(exc)
    click.echo(f"wrote {out_path}")
