from mono3daug.core.mask import BoxMask, box_pixel_bounds, build_box_mask
from mono3daug.core.rng import RandomSource, derive_stream
from mono3daug.core.types import DONTCARE, ObjectLabel, PixelImage, Sample, wrap_angle

__all__ = [
    "BoxMask",
    "DONTCARE",
    "ObjectLabel",
    "PixelImage",
    "RandomSource",
    "Sample",
    "box_pixel_bounds",
    "build_box_mask",
    "derive_stream",
    "wrap_angle",
]
