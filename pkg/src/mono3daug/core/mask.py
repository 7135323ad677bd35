"""Binary raster of bounding-box footprints.

A pixel (px, py) belongs to a box iff floor(left) <= px < ceil(right) and
floor(top) <= py < ceil(bottom), clipped to the image; half-open intervals
let adjacent boxes tile without double counting.  DontCare labels never
contribute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from mono3daug import kernels
from mono3daug.core.types import ObjectLabel, _frozen_u8


@dataclass(frozen=True, eq=False)
class BoxMask:
    """Read-only (H, W) uint8 raster with 1 under the generating boxes."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen_u8(self.bits, "(height, width)", 2))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoxMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )


def box_pixel_bounds(
    box2d: tuple[float, float, float, float], width: int, height: int
) -> tuple[int, int, int, int] | None:
    """Integer pixel bounds [x0, x1) x [y0, y1) of a box, clipped; None if empty."""
    left, top, right, bottom = box2d
    x0 = min(max(math.floor(left), 0), width)
    y0 = min(max(math.floor(top), 0), height)
    x1 = min(max(math.ceil(right), 0), width)
    y1 = min(max(math.ceil(bottom), 0), height)
    if x1 <= x0 or y1 <= y0:
        return None
    return x0, y0, x1, y1


def build_box_mask(labels: Iterable[ObjectLabel], width: int, height: int) -> BoxMask:
    if width <= 0 or height <= 0:
        raise ValueError("mask dimensions must be positive")
    rows = []
    for lab in labels:
        if lab.is_dontcare:
            continue
        bounds = box_pixel_bounds(lab.box2d, width, height)
        if bounds is not None:
            rows.append(bounds)
    bounds_arr = np.array(rows, dtype=np.int64).reshape(len(rows), 4)
    return BoxMask(kernels.rasterize_boxes(bounds_arr, height, width))
