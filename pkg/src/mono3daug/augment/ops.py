"""The augmentation transforms.

Every op is a pure function of its input sample(s), its config, and a
RandomSource, and never touches a surviving label's 3D fields: dims,
location, yaw, and observation angle pass through bit-identical.  Cutout
and the photometric stack change pixels only; the pairwise blend/paste ops
and mosaic tiling also edit the label set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from mono3daug import kernels
from mono3daug.augment.config import (
    GAUSSIAN_FILL_MEAN,
    GAUSSIAN_FILL_STD,
    GREY_FILL,
    OP_CUTOUT,
    OP_CUTPASTE,
    OP_MIXUP,
    OP_MOSAIC,
    OP_PHOTOMETRIC,
    CutoutConfig,
    MosaicConfig,
    PairConfig,
    PhotometricConfig,
)
from mono3daug.core.mask import build_box_mask
from mono3daug.core.rng import RandomSource
from mono3daug.core.types import ObjectLabel, PixelImage, Sample
from mono3daug.errors import DimensionMismatch
from mono3daug.geometry import Rect2D, iou_2d

# Blur directions for angles 0, 45, 90, 135 degrees (image y grows down).
BLUR_DIRECTIONS = ((1, 0), (1, -1), (0, 1), (1, 1))

# A partner box that keeps <= this fraction of its area when cropped to the
# reference dimensions is dropped (it loses >= 60% of its pixels).
CONFORM_RETENTION = 0.4


@dataclass(frozen=True)
class Provenance:
    op: str
    partner_ids: tuple[str, ...]
    draw_digest: str


@dataclass(frozen=True)
class AugmentedSample:
    """A transformed sample plus how it was produced.

    ``patches`` records cutout fill regions as (x0, y0, x1, y1) pixel rects
    (used by preview rendering); ``counters`` carries per-op bookkeeping for
    pipeline summaries.
    """

    id: str
    image: PixelImage
    labels: tuple[ObjectLabel, ...]
    provenance: tuple[Provenance, ...] = ()
    patches: tuple[tuple[int, int, int, int], ...] = ()
    counters: dict = field(default_factory=dict, compare=False)

    def to_sample(self) -> Sample:
        return Sample(id=self.id, image=self.image, labels=self.labels)


def _round_clip_u8(arr: np.ndarray) -> np.ndarray:
    rounded = np.trunc(arr + np.copysign(0.5, arr))
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


def overlap_fraction(box2d, rect: tuple[float, float, float, float]) -> float:
    """Fraction of a box's original area that lies inside a rectangle."""
    left, top, right, bottom = box2d
    area = max(0.0, right - left) * max(0.0, bottom - top)
    if area <= 0.0:
        return 0.0
    il = max(left, rect[0])
    it = max(top, rect[1])
    ir = min(right, rect[2])
    ib = min(bottom, rect[3])
    inter = max(0.0, ir - il) * max(0.0, ib - it)
    return inter / area


def _clip_box(box2d, rect):
    return (
        max(box2d[0], rect[0]),
        max(box2d[1], rect[1]),
        min(box2d[2], rect[2]),
        min(box2d[3], rect[3]),
    )


def conform(sample: Sample, width: int, height: int) -> tuple[Sample, int]:
    """Crop and/or zero-pad a sample at the bottom-right to (width, height).

    No resampling, so 2D/3D consistency of kept boxes is untouched.  Boxes
    losing 60% or more of their area to the crop are dropped; survivors are
    clipped.  Returns the conformed sample and the dropped-box count.
    """
    if sample.width == width and sample.height == height:
        return sample, 0
    out = np.zeros((height, width, 3), dtype=np.uint8)
    copy_w = min(width, sample.width)
    copy_h = min(height, sample.height)
    out[:copy_h, :copy_w] = sample.image.pixels[:copy_h, :copy_w]
    crop = (0.0, 0.0, float(copy_w), float(copy_h))
    labels = []
    dropped = 0
    for lab in sample.labels:
        kept_fraction = overlap_fraction(lab.box2d, crop)
        if 1.0 - kept_fraction >= 1.0 - CONFORM_RETENTION:
            dropped += 1
            continue
        labels.append(replace(lab, box2d=_clip_box(lab.box2d, crop)))
    out.flags.writeable = False
    return Sample(id=sample.id, image=PixelImage(out), labels=tuple(labels)), dropped


def cutout(sample: Sample, cfg: CutoutConfig, rng: RandomSource) -> AugmentedSample:
    """Fill cfg.holes square patches; labels pass through unchanged."""
    px = sample.image.writable_copy()
    width, height = sample.width, sample.height
    patches = []
    for _ in range(cfg.holes):
        cx = rng.randint(width)
        cy = rng.randint(height)
        x0 = max(0, cx - cfg.side // 2)
        y0 = max(0, cy - cfg.side // 2)
        x1 = min(width, cx - cfg.side // 2 + cfg.side)
        y1 = min(height, cy - cfg.side // 2 + cfg.side)
        region = px[y0:y1, x0:x1]
        if cfg.fill == "zeros":
            region[:] = 0
        elif cfg.fill == "grey":
            region[:] = GREY_FILL
        else:
            noise = rng.normal_array(region.shape, GAUSSIAN_FILL_MEAN, GAUSSIAN_FILL_STD)
            region[:] = _round_clip_u8(noise)
        patches.append((x0, y0, x1, y1))
    px.flags.writeable = False
    return AugmentedSample(
        id=sample.id,
        image=PixelImage(px),
        labels=sample.labels,
        provenance=(Provenance(OP_CUTOUT, (), rng.digest()),),
        patches=tuple(patches),
        counters={"holes": len(patches)},
    )


def photometric(sample: Sample, cfg: PhotometricConfig, rng: RandomSource) -> AugmentedSample:
    """Blur, then RGB shift, then contrast, each gated by its probability.

    One gate draw is consumed per stage whether or not it fires, so the draw
    log has a fixed shape.
    """
    px = sample.image.pixels
    if rng.random() < cfg.blur_prob:
        dx, dy = BLUR_DIRECTIONS[rng.randint(len(BLUR_DIRECTIONS))]
        px = kernels.motion_blur(px, cfg.blur_len, dx, dy)
    if rng.random() < cfg.rgb_shift_prob:
        offsets = [rng.randint_signed(cfg.rgb_shift_max) for _ in range(3)]
        px = kernels.shift_channels(px, *offsets)
    if rng.random() < cfg.contrast_prob:
        alpha = rng.uniform(1.0 - cfg.contrast_max, 1.0 + cfg.contrast_max)
        means = px.mean(axis=(0, 1), dtype=np.float64)
        px = kernels.scale_contrast(px, alpha, means)
    if px is sample.image.pixels:
        px = px.copy()
    px.flags.writeable = False
    return AugmentedSample(
        id=sample.id,
        image=PixelImage(px),
        labels=sample.labels,
        provenance=(Provenance(OP_PHOTOMETRIC, (), rng.digest()),),
        counters={},
    )


def filter_partner_boxes(
    ref_labels: Sequence[ObjectLabel],
    incoming: Sequence[ObjectLabel],
    iou_threshold: float,
) -> list[ObjectLabel]:
    """Keep incoming boxes whose max 2D IoU against the reference set is
    strictly below the threshold; pass threshold = inf to accept all."""
    ref_rects = [Rect2D(*lab.box2d) for lab in ref_labels]
    kept = []
    for lab in incoming:
        rect = Rect2D(*lab.box2d)
        worst = max((iou_2d(ref, rect) for ref in ref_rects), default=0.0)
        if worst < iou_threshold:
            kept.append(lab)
    return kept


def _pairwise(
    op: str, a: Sample, b: Sample, cfg: PairConfig, rng: RandomSource | None, blend_fn
) -> AugmentedSample:
    b_conformed, conform_dropped = conform(b, a.width, a.height)
    ref = [lab for lab in a.labels if not lab.is_dontcare]
    candidates = [lab for lab in b_conformed.labels if not lab.is_dontcare]
    threshold = cfg.iou_threshold if cfg.iou_check else math.inf
    kept = filter_partner_boxes(ref, candidates, threshold)
    mask = build_box_mask(kept, a.width, a.height)
    out = blend_fn(a.image.pixels, b_conformed.image.pixels, mask.bits)
    out.flags.writeable = False
    return AugmentedSample(
        id=a.id,
        image=PixelImage(out),
        labels=a.labels + tuple(kept),
        provenance=(Provenance(op, (b.id,), rng.digest() if rng else ""),),
        counters={
            "boxes_kept": len(kept),
            "boxes_rejected": len(candidates) - len(kept),
            "conform_dropped": conform_dropped,
        },
    )


def box_mixup(
    a: Sample, b: Sample, cfg: PairConfig, rng: RandomSource | None = None
) -> AugmentedSample:
    """Average the two images under the partner's surviving box mask and
    concatenate the surviving partner labels onto the reference labels."""
    return _pairwise(OP_MIXUP, a, b, cfg, rng, kernels.blend_mean_masked)


def box_cut_paste(
    a: Sample, b: Sample, cfg: PairConfig, rng: RandomSource | None = None
) -> AugmentedSample:
    """Paste the partner's pixels verbatim under its surviving box mask."""
    return _pairwise(OP_CUTPASTE, a, b, cfg, rng, kernels.blend_copy_masked)


def mosaic_tiles(width: int, height: int) -> tuple[tuple[int, int, int, int], ...]:
    """Quadrants (TL, TR, BL, BR) split at the image center."""
    cx, cy = width // 2, height // 2
    return (
        (0, 0, cx, cy),
        (cx, 0, width, cy),
        (0, cy, cx, height),
        (cx, cy, width, height),
    )


def mosaic_tile(
    quads: Sequence[Sample], cfg: MosaicConfig, rng: RandomSource | None = None
) -> AugmentedSample:
    """Tile the four corresponding quadrants of four samples into one image.

    Sample k contributes its own quadrant k.  A label survives iff at least
    cfg.retention of its original box area lies inside its quadrant; kept
    boxes are clipped to the quadrant, 3D fields untouched.
    """
    if len(quads) != 4:
        raise DimensionMismatch(f"mosaic needs exactly 4 samples, got {len(quads)}")
    ref = quads[0]
    width, height = ref.width, ref.height
    conformed = [ref]
    dropped_conform = 0
    for q in quads[1:]:
        cq, dropped = conform(q, width, height)
        dropped_conform += dropped
        conformed.append(cq)
    for cq in conformed:
        if cq.width != width or cq.height != height:
            raise DimensionMismatch(
                f"sample {cq.id} is {cq.width}x{cq.height}, expected {width}x{height}"
            )
    tiles = mosaic_tiles(width, height)
    out = np.empty((height, width, 3), dtype=np.uint8)
    labels = []
    kept = 0
    dropped_retention = 0
    for k, (sample_k, tile) in enumerate(zip(conformed, tiles)):
        x0, y0, x1, y1 = tile
        out[y0:y1, x0:x1] = sample_k.image.pixels[y0:y1, x0:x1]
        tile_rect = (float(x0), float(y0), float(x1), float(y1))
        for lab in sample_k.labels:
            if overlap_fraction(lab.box2d, tile_rect) >= cfg.retention:
                labels.append(replace(lab, box2d=_clip_box(lab.box2d, tile_rect)))
                kept += 1
            else:
                dropped_retention += 1
    out.flags.writeable = False
    return AugmentedSample(
        id=ref.id,
        image=PixelImage(out),
        labels=tuple(labels),
        provenance=(
            Provenance(OP_MOSAIC, tuple(q.id for q in quads[1:]), rng.digest() if rng else ""),
        ),
        counters={
            "boxes_kept": kept,
            "boxes_dropped": dropped_retention,
            "conform_dropped": dropped_conform,
        },
    )
