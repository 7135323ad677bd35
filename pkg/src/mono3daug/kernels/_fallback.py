"""Numpy implementation of the pixel kernels.

Reference semantics for both backends; the compiled version must match these
outputs bit for bit.  All channel arithmetic rounds to nearest with ties
away from zero, then clamps to [0, 255].
"""

from __future__ import annotations

import numpy as np


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.trunc(x + np.copysign(0.5, x))


def rasterize_boxes(bounds: np.ndarray, height: int, width: int) -> np.ndarray:
    """Fill 1 under each [x0, x1) x [y0, y1) row of pre-clipped integer bounds."""
    mask = np.zeros((height, width), dtype=np.uint8)
    for x0, y0, x1, y1 in np.asarray(bounds, dtype=np.int64).reshape(-1, 4):
        mask[y0:y1, x0:x1] = 1
    return mask


def blend_mean_masked(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per-pixel mean of a and b under the mask, a elsewhere.

    The mean of two uint8 values has fractional part 0 or .5, so rounding
    ties away from zero is exactly (a + b + 1) >> 1 in integers.
    """
    mean = (a.astype(np.uint16) + b.astype(np.uint16) + 1) >> 1
    out = np.where(mask[:, :, None].astype(bool), mean.astype(np.uint8), a)
    return np.ascontiguousarray(out)


def blend_copy_masked(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """b under the mask, a elsewhere (bit-exact partition)."""
    out = np.where(mask[:, :, None].astype(bool), b, a)
    return np.ascontiguousarray(out)


def motion_blur(img: np.ndarray, length: int, dx: int, dy: int) -> np.ndarray:
    """1D normalized averaging kernel of `length` taps along (dx, dy).

    Tap offsets are k - length//2 for k in [0, length); out-of-image taps
    clamp to the border pixel.  Integer arithmetic keeps the rounding exact:
    round(sum/length) half away from zero is (2*sum + length) // (2*length).
    """
    if length < 1:
        raise ValueError("blur length must be >= 1")
    if length == 1:
        return img.copy()
    height, width = img.shape[:2]
    acc = np.zeros(img.shape, dtype=np.int64)
    cols = np.arange(width)
    rows_idx = np.arange(height)
    for k in range(length):
        t = k - length // 2
        xs = np.clip(cols + t * dx, 0, width - 1)
        ys = np.clip(rows_idx + t * dy, 0, height - 1)
        acc += img[ys[:, None], xs[None, :], :]
    out = (2 * acc + length) // (2 * length)
    return np.ascontiguousarray(out.astype(np.uint8))


def shift_channels(img: np.ndarray, dr: int, dg: int, db: int) -> np.ndarray:
    """Add a constant integer offset per channel, clamped to [0, 255]."""
    shifted = img.astype(np.int32) + np.array([dr, dg, db], dtype=np.int32)
    return np.ascontiguousarray(np.clip(shifted, 0, 255).astype(np.uint8))


def scale_contrast(img: np.ndarray, alpha: float, means: np.ndarray) -> np.ndarray:
    """out = round(mean_c + alpha * (v - mean_c)) per channel, clamped."""
    means = np.asarray(means, dtype=np.float64).reshape(1, 1, 3)
    scaled = means + alpha * (img.astype(np.float64) - means)
    out = np.clip(_round_half_away(scaled), 0.0, 255.0)
    return np.ascontiguousarray(out.astype(np.uint8))
