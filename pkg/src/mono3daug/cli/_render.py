"""Preview rendering: annotated before/after panels.

Blue outlines mark object annotations, red outlines mark cutout fill
regions.  Outline thickness is fixed at 2 px so preview PNGs are stable
golden-test artifacts.
"""

from __future__ import annotations

import numpy as np

BLUE = (0, 0, 255)
RED = (255, 0, 0)
OUTLINE = 2
GAP = 4
GAP_VALUE = 255


def draw_rect(arr: np.ndarray, rect, color, thickness: int = OUTLINE) -> None:
    height, width = arr.shape[:2]
    x0 = int(np.floor(rect[0]))
    y0 = int(np.floor(rect[1]))
    x1 = int(np.ceil(rect[2]))
    y1 = int(np.ceil(rect[3]))
    x0c, x1c = max(0, x0), min(width, x1)
    y0c, y1c = max(0, y0), min(height, y1)
    if x1c <= x0c or y1c <= y0c:
        return
    col = np.array(color, dtype=np.uint8)
    arr[y0c:min(y0 + thickness, y1c), x0c:x1c] = col
    arr[max(y1 - thickness, y0c):y1c, x0c:x1c] = col
    arr[y0c:y1c, x0c:min(x0 + thickness, x1c)] = col
    arr[y0c:y1c, max(x1 - thickness, x0c):x1c] = col


def side_by_side(left: np.ndarray, right: np.ndarray, gap: int = GAP) -> np.ndarray:
    height = max(left.shape[0], right.shape[0])
    width = left.shape[1] + gap + right.shape[1]
    canvas = np.full((height, width, 3), GAP_VALUE, dtype=np.uint8)
    canvas[: left.shape[0], : left.shape[1]] = left
    canvas[: right.shape[0], left.shape[1] + gap:] = right
    return canvas


def render_preview(original, augmented) -> np.ndarray:
    """Original | augmented panels with annotation and patch overlays."""
    left = original.image.writable_copy()
    for lab in original.labels:
        draw_rect(left, lab.box2d, BLUE)
    right = augmented.image.writable_copy()
    for lab in augmented.labels:
        draw_rect(right, lab.box2d, BLUE)
    for patch in augmented.patches:
        draw_rect(right, patch, RED)
    return side_by_side(left, right)
