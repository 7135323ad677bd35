"""Domain types: images, labels, and samples in the KITTI layout.

All types are immutable after construction (pixel buffers are frozen numpy
arrays) and therefore safe to share across worker threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

DONTCARE = "DontCare"

_SAMPLE_ID_RE = re.compile(r"\d{6}")


def wrap_angle(value: float) -> float:
    """Wrap an angle in radians into [-pi, pi)."""
    return (value + math.pi) % (2.0 * math.pi) - math.pi


def _frozen_u8(arr: np.ndarray, shape_desc: str, ndim: int) -> np.ndarray:
    if not isinstance(arr, np.ndarray) or arr.dtype != np.uint8 or arr.ndim != ndim:
        raise ValueError(f"expected a uint8 array of shape {shape_desc}")
    if arr.flags.writeable or not arr.flags.c_contiguous:
        arr = np.ascontiguousarray(arr).copy()
        arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PixelImage:
    """An 8-bit RGB raster, stored row-major as a read-only (H, W, 3) array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = self.pixels
        if not isinstance(px, np.ndarray) or px.ndim != 3 or px.shape[2] != 3:
            raise ValueError("pixel buffer must have shape (height, width, 3)")
        object.__setattr__(self, "pixels", _frozen_u8(px, "(height, width, 3)", 3))

    @classmethod
    def from_array(cls, arr) -> "PixelImage":
        return cls(np.asarray(arr, dtype=np.uint8))

    @classmethod
    def filled(cls, width: int, height: int, value: int = 0) -> "PixelImage":
        return cls(np.full((height, width, 3), value, dtype=np.uint8))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def writable_copy(self) -> np.ndarray:
        return self.pixels.copy()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PixelImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, slots=True)
class ObjectLabel:
    """One KITTI annotation line.

    ``box2d`` is (left, top, right, bottom) in pixels, ``dims3d`` is
    (height, width, length) in meters, ``location3d`` is the camera-frame
    (x, y, z) of the bottom-face center.  ``score`` is present only for
    prediction files.  DontCare labels carry -1 sentinels in the 3D fields;
    geometry helpers must not be applied to them.
    """

    class_name: str
    truncation: float
    occlusion: int
    alpha: float
    box2d: tuple[float, float, float, float]
    dims3d: tuple[float, float, float]
    location3d: tuple[float, float, float]
    rotation_y: float
    score: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "box2d", tuple(float(v) for v in self.box2d))
        object.__setattr__(self, "dims3d", tuple(float(v) for v in self.dims3d))
        object.__setattr__(self, "location3d", tuple(float(v) for v in self.location3d))
        if len(self.box2d) != 4 or len(self.dims3d) != 3 or len(self.location3d) != 3:
            raise ValueError("box2d/dims3d/location3d have fixed arity 4/3/3")

    @property
    def is_dontcare(self) -> bool:
        return self.class_name == DONTCARE

    @property
    def box_width(self) -> float:
        return self.box2d[2] - self.box2d[0]

    @property
    def box_height(self) -> float:
        return self.box2d[3] - self.box2d[1]

    @property
    def box_area(self) -> float:
        return max(0.0, self.box_width) * max(0.0, self.box_height)


@dataclass(frozen=True)
class Sample:
    """A dataset frame: id, decoded image, and its ordered labels.

    Label boxes are expected to lie inside the image (loading clips them);
    construction enforces this so downstream geometry can rely on it.
    """

    id: str
    image: PixelImage
    labels: tuple[ObjectLabel, ...] = field(default=())

    def __post_init__(self):
        if not _SAMPLE_ID_RE.fullmatch(self.id):
            raise ValueError(f"sample id must be a zero-padded 6-digit string, got {self.id!r}")
        object.__setattr__(self, "labels", tuple(self.labels))
        w, h = self.image.width, self.image.height
        for lab in self.labels:
            left, top, right, bottom = lab.box2d
            if not (0.0 <= left <= right <= w and 0.0 <= top <= bottom <= h):
                raise ValueError(
                    f"label box {lab.box2d} outside image {w}x{h} in sample {self.id}"
                )

    @property
    def width(self) -> int:
        return self.image.width

    @property
    def height(self) -> int:
        return self.image.height
