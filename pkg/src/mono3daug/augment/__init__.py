from mono3daug.augment.config import (
    FILL_MODES,
    OP_CUTOUT,
    OP_CUTPASTE,
    OP_MIXUP,
    OP_MOSAIC,
    OP_NAMES,
    OP_PHOTOMETRIC,
    AugmentConfig,
    CutoutConfig,
    MosaicConfig,
    PairConfig,
    PhotometricConfig,
    op_config,
)
from mono3daug.augment.ops import (
    AugmentedSample,
    Provenance,
    box_cut_paste,
    box_mixup,
    conform,
    cutout,
    filter_partner_boxes,
    mosaic_tile,
    mosaic_tiles,
    overlap_fraction,
    photometric,
)
from mono3daug.augment.pipeline import (
    PipelineSummary,
    ScheduleEntry,
    run_pipeline,
)

__all__ = [
    "AugmentConfig",
    "AugmentedSample",
    "CutoutConfig",
    "FILL_MODES",
    "MosaicConfig",
    "OP_CUTOUT",
    "OP_CUTPASTE",
    "OP_MIXUP",
    "OP_MOSAIC",
    "OP_NAMES",
    "OP_PHOTOMETRIC",
    "PairConfig",
    "PhotometricConfig",
    "PipelineSummary",
    "Provenance",
    "ScheduleEntry",
    "box_cut_paste",
    "box_mixup",
    "conform",
    "cutout",
    "filter_partner_boxes",
    "mosaic_tile",
    "mosaic_tiles",
    "op_config",
    "overlap_fraction",
    "photometric",
    "run_pipeline",
]
