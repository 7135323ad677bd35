"""Run configuration: a JSON file mirroring the CLI surface.

Shape (all keys optional):

    {
      "dataset_root": "data/training",
      "split": "splits/val.txt",
      "output_root": "out",
      "seed": 7,
      "workers": 1,
      "defaults": {"cutout": {"holes": 2, "side": 64, "fill": "zeros"},
                   "photometric": {...}, "mixup": {...},
                   "cutpaste": {...}, "mosaic": {...}},
      "schedule": [{"op": "box-mixup", "iou_check": true}, ...],
      "eval": {"iou": {"car": 0.7}, "iou_all": null, "interp": "r40",
               "difficulties": [{"name": "easy", "min_height": 40,
                                 "max_occlusion": 0, "max_truncation": 0.15}, ...]}
    }

Command-line flags override config values, which override built-in defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from mono3daug.augment.config import (
    AugmentConfig,
    CutoutConfig,
    MosaicConfig,
    PairConfig,
    PhotometricConfig,
)
from mono3daug.augment.pipeline import ScheduleEntry
from mono3daug.errors import ConfigInvalid
from mono3daug.eval.ap import INTERP_MODES
from mono3daug.eval.difficulty import DifficultyRule, validate_rules
from mono3daug.eval.metrics import CLASSES

_SECTIONS = {
    "cutout": CutoutConfig,
    "photometric": PhotometricConfig,
    "mixup": PairConfig,
    "cutpaste": PairConfig,
    "mosaic": MosaicConfig,
}

_CLASS_BY_LOWER = {c.lower(): c for c in CLASSES}


@dataclass
class RunConfig:
    dataset_root: str | None = None
    split: str | None = None
    output_root: str | None = None
    seed: int | None = None
    workers: int | None = None
    defaults: AugmentConfig = field(default_factory=AugmentConfig)
    schedule: list[ScheduleEntry] = field(default_factory=list)
    eval_iou: dict[str, float] = field(default_factory=dict)
    eval_iou_all: float | None = None
    eval_interp: str | None = None
    eval_difficulties: tuple[DifficultyRule, ...] | None = None


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigInvalid(message)


def _build_defaults(raw: dict) -> AugmentConfig:
    _expect(isinstance(raw, dict), "'defaults' must be an object")
    unknown = set(raw) - set(_SECTIONS)
    _expect(not unknown, f"unknown defaults section(s): {sorted(unknown)}")
    sections = {}
    for name, cls in _SECTIONS.items():
        overrides = raw.get(name, {})
        _expect(isinstance(overrides, dict), f"defaults.{name} must be an object")
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(overrides) - known
        _expect(not bad, f"unknown defaults.{name} option(s): {sorted(bad)}")
        try:
            sections[name] = dataclasses.replace(cls(), **overrides)
        except TypeError as exc:
            raise ConfigInvalid(f"bad defaults.{name}: {exc}") from exc
    return AugmentConfig(**sections)


def _build_schedule(raw) -> list[ScheduleEntry]:
    _expect(isinstance(raw, list), "'schedule' must be a list")
    entries = []
    for item in raw:
        _expect(isinstance(item, dict) and "op" in item, "schedule entries need an 'op' key")
        overrides = {k: v for k, v in item.items() if k != "op"}
        entries.append(ScheduleEntry(op=item["op"], overrides=overrides))
    return entries


def parse_iou_overrides(spec: str) -> dict[str, float]:
    """Parse 'car=0.7,pedestrian=0.25' into canonical class thresholds."""
    out = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigInvalid(f"bad --iou entry {part!r}; expected class=threshold")
        name, _, value = part.partition("=")
        cls = _CLASS_BY_LOWER.get(name.strip().lower())
        if cls is None:
            raise ConfigInvalid(
                f"unknown class {name.strip()!r} in --iou; expected one of "
                + ", ".join(c.lower() for c in CLASSES)
            )
        try:
            thr = float(value)
        except ValueError:
            raise ConfigInvalid(f"bad threshold {value!r} for class {name.strip()!r}") from None
        _expect(0.0 < thr <= 1.0, f"threshold for {cls} must be in (0, 1], got {thr}")
        out[cls] = thr
    return out


def _build_eval(raw: dict, cfg: RunConfig) -> None:
    _expect(isinstance(raw, dict), "'eval' must be an object")
    unknown = set(raw) - {"iou", "iou_all", "interp", "difficulties"}
    _expect(not unknown, f"unknown eval option(s): {sorted(unknown)}")
    iou = raw.get("iou", {})
    _expect(isinstance(iou, dict), "eval.iou must be an object")
    for name, value in iou.items():
        cfg.eval_iou.update(parse_iou_overrides(f"{name}={value}"))
    if raw.get("iou_all") is not None:
        cfg.eval_iou_all = float(raw["iou_all"])
        _expect(0.0 < cfg.eval_iou_all <= 1.0, "eval.iou_all must be in (0, 1]")
    if raw.get("interp") is not None:
        cfg.eval_interp = str(raw["interp"]).lower()
        _expect(
            cfg.eval_interp in INTERP_MODES,
            f"eval.interp must be one of {INTERP_MODES}",
        )
    if raw.get("difficulties") is not None:
        rules = []
        for item in raw["difficulties"]:
            _expect(
                isinstance(item, dict)
                and {"name", "min_height", "max_occlusion", "max_truncation"} <= set(item),
                "each difficulty needs name, min_height, max_occlusion, max_truncation",
            )
            rules.append(
                DifficultyRule(
                    str(item["name"]),
                    float(item["min_height"]),
                    int(item["max_occlusion"]),
                    float(item["max_truncation"]),
                )
            )
        try:
            validate_rules(rules)
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from exc
        cfg.eval_difficulties = tuple(rules)


def load_run_config(path=None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    path = Path(path)
    if not path.is_file():
        raise ConfigInvalid(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot parse config {path}: {exc}") from exc
    _expect(isinstance(raw, dict), "config root must be a JSON object")
    unknown = set(raw) - {
        "dataset_root", "split", "output_root", "seed", "workers",
        "defaults", "schedule", "eval",
    }
    _expect(not unknown, f"unknown config key(s): {sorted(unknown)}")
    for key in ("dataset_root", "split", "output_root"):
        if raw.get(key) is not None:
            setattr(cfg, key, str(raw[key]))
    if raw.get("seed") is not None:
        _expect(isinstance(raw["seed"], int), "'seed' must be an integer")
        cfg.seed = raw["seed"]
    if raw.get("workers") is not None:
        _expect(
            isinstance(raw["workers"], int) and raw["workers"] >= 1,
            "'workers' must be a positive integer",
        )
        cfg.workers = raw["workers"]
    if "defaults" in raw:
        cfg.defaults = _build_defaults(raw["defaults"])
    if "schedule" in raw:
        cfg.schedule = _build_schedule(raw["schedule"])
    if "eval" in raw:
        _build_eval(raw["eval"], cfg)
    return cfg
