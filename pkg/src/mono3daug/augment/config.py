"""Augmentation configuration with validated defaults.

Defaults: cutout uses 2 zero-filled holes; photometric sub-ops follow the
usual albumentations-style limits (blur kernel 7, channel shift 20, contrast
0.2, each at probability 0.5); the pairwise ops keep the 0.4 overlap-reject
threshold and mosaic the 0.4 area-retention threshold.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from mono3daug.errors import ConfigInvalid, UnknownOp

FILL_MODES = ("zeros", "grey", "gaussian")

OP_CUTOUT = "cutout"
OP_PHOTOMETRIC = "photometric"
OP_MIXUP = "box-mixup"
OP_CUTPASTE = "box-cut-paste"
OP_MOSAIC = "mosaic-tile"
OP_NAMES = (OP_CUTOUT, OP_PHOTOMETRIC, OP_MIXUP, OP_CUTPASTE, OP_MOSAIC)

GREY_FILL = 127
GAUSSIAN_FILL_MEAN = 127.0
GAUSSIAN_FILL_STD = 32.0


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigInvalid(message)


def _check_prob(value, name: str) -> None:
    _check(0.0 <= value <= 1.0, f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class CutoutConfig:
    holes: int = 2
    side: int = 64
    fill: str = "zeros"

    def __post_init__(self):
        _check(self.holes >= 0, f"cutout holes must be >= 0, got {self.holes}")
        _check(self.side >= 1, f"cutout side must be >= 1, got {self.side}")
        _check(self.fill in FILL_MODES, f"cutout fill must be one of {FILL_MODES}")


@dataclass(frozen=True)
class PhotometricConfig:
    blur_len: int = 7
    blur_prob: float = 0.5
    rgb_shift_max: int = 20
    rgb_shift_prob: float = 0.5
    contrast_max: float = 0.2
    contrast_prob: float = 0.5

    def __post_init__(self):
        _check(self.blur_len >= 1, f"blur_len must be >= 1, got {self.blur_len}")
        _check(0 <= self.rgb_shift_max <= 255, "rgb_shift_max must be in [0, 255]")
        _check(0.0 <= self.contrast_max <= 1.0, "contrast_max must be in [0, 1]")
        for name in ("blur_prob", "rgb_shift_prob", "contrast_prob"):
            _check_prob(getattr(self, name), name)


@dataclass(frozen=True)
class PairConfig:
    """Settings shared by the two-sample blend/paste ops."""

    iou_check: bool = True
    iou_threshold: float = 0.4

    def __post_init__(self):
        _check_prob(self.iou_threshold, "iou_threshold")


@dataclass(frozen=True)
class MosaicConfig:
    retention: float = 0.4

    def __post_init__(self):
        _check_prob(self.retention, "retention")


@dataclass(frozen=True)
class AugmentConfig:
    cutout: CutoutConfig = field(default_factory=CutoutConfig)
    photometric: PhotometricConfig = field(default_factory=PhotometricConfig)
    mixup: PairConfig = field(default_factory=PairConfig)
    cutpaste: PairConfig = field(default_factory=PairConfig)
    mosaic: MosaicConfig = field(default_factory=MosaicConfig)


_OP_SECTIONS = {
    OP_CUTOUT: ("cutout", CutoutConfig),
    OP_PHOTOMETRIC: ("photometric", PhotometricConfig),
    OP_MIXUP: ("mixup", PairConfig),
    OP_CUTPASTE: ("cutpaste", PairConfig),
    OP_MOSAIC: ("mosaic", MosaicConfig),
}

# Partner samples each op draws from the split before its own randomness.
PARTNER_COUNT = {
    OP_CUTOUT: 0,
    OP_PHOTOMETRIC: 0,
    OP_MIXUP: 1,
    OP_CUTPASTE: 1,
    OP_MOSAIC: 3,
}


def op_config(base: AugmentConfig, op: str, overrides: dict | None = None):
    """Resolve the per-op config for a schedule entry, applying overrides."""
    if op not in _OP_SECTIONS:
        raise UnknownOp(f"unknown op {op!r}; expected one of {OP_NAMES}")
    section, cls = _OP_SECTIONS[op]
    cfg = getattr(base, section)
    if not overrides:
        return cfg
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigInvalid(
            f"unknown {op} option(s): {sorted(unknown)}; expected {sorted(known)}"
        )
    try:
        return dataclasses.replace(cfg, **overrides)
    except TypeError as exc:
        raise ConfigInvalid(f"bad {op} overrides: {exc}") from exc
