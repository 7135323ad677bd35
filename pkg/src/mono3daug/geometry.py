"""Box overlap machinery: axis-aligned 2D IoU, rotated bird's-eye-view IoU
via convex polygon clipping, and 3D IoU.

The BEV intersection clips one rectangle's corner polygon against the other
rectangle's four half-planes (iterative half-plane clipping; exact for
convex input) and measures the result with the shoelace formula.  Slivers
below ``AREA_EPS`` square meters are treated as empty.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from mono3daug.core.types import ObjectLabel

AREA_EPS = 1e-12

Point = tuple[float, float]


class Rect2D(NamedTuple):
    left: float
    top: float
    right: float
    bottom: float

    @property
    def area(self) -> float:
        return max(0.0, self.right - self.left) * max(0.0, self.bottom - self.top)

    def intersect(self, other: "Rect2D") -> "Rect2D":
        return Rect2D(
            max(self.left, other.left),
            max(self.top, other.top),
            min(self.right, other.right),
            min(self.bottom, other.bottom),
        )


class RotatedRect(NamedTuple):
    """Ground-plane rectangle: center (x, z), size (length, width), yaw."""

    center_x: float
    center_z: float
    length: float
    width: float
    angle: float

    @property
    def area(self) -> float:
        return self.length * self.width


class Box3D(NamedTuple):
    bev: RotatedRect
    y_bottom: float
    height: float


def iou_2d(a: Rect2D, b: Rect2D) -> float:
    inter = a.intersect(b).area
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def to_bev(label: ObjectLabel) -> RotatedRect:
    """Ground-plane footprint of a label's 3D box (KITTI axis convention)."""
    x, _, z = label.location3d
    h, w, l = label.dims3d
    return RotatedRect(x, z, l, w, label.rotation_y)


def to_box3d(label: ObjectLabel) -> Box3D:
    """3D box of a label; location y is the bottom-face center, y grows down."""
    h, _, _ = label.dims3d
    return Box3D(to_bev(label), label.location3d[1], h)


def rect_corners(r: RotatedRect) -> list[Point]:
    """Corner polygon in counter-clockwise order in the (x, z) plane."""
    c = math.cos(r.angle)
    s = math.sin(r.angle)
    hl = 0.5 * r.length
    hw = 0.5 * r.width
    corners = []
    for dx, dz in ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)):
        corners.append((r.center_x + dx * c + dz * s, r.center_z - dx * s + dz * c))
    return corners


def polygon_area(points: list[Point]) -> float:
    """Absolute shoelace area."""
    n = len(points)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) * 0.5


def clip_convex(subject: list[Point], clip: list[Point]) -> list[Point]:
    """Clip a convex polygon against a counter-clockwise convex polygon.

    Points exactly on a clip edge count as inside, so clipping a polygon
    against itself returns it unchanged.
    """
    output = list(subject)
    n = len(clip)
    for i in range(n):
        if not output:
            return []
        ax, ay = clip[i]
        bx, by = clip[(i + 1) % n]
        ex, ey = bx - ax, by - ay

        def side(p: Point) -> float:
            return ex * (p[1] - ay) - ey * (p[0] - ax)

        polygon = output
        output = []
        s = polygon[-1]
        ds = side(s)
        for e in polygon:
            de = side(e)
            if de >= 0.0:
                if ds < 0.0:
                    t = ds / (ds - de)
                    output.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
                output.append(e)
            elif ds >= 0.0:
                t = ds / (ds - de)
                output.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
            s, ds = e, de
    return output


def intersection_area_bev(a: RotatedRect, b: RotatedRect) -> float:
    """Area of the intersection of two ground-plane rectangles.

    Arguments are ordered canonically before clipping so the result is
    exactly symmetric in (a, b) despite floating-point clipping.
    """
    if tuple(b) < tuple(a):
        a, b = b, a
    area = polygon_area(clip_convex(rect_corners(a), rect_corners(b)))
    return 0.0 if area < AREA_EPS else area


def iou_bev(a: RotatedRect, b: RotatedRect) -> float:
    inter = intersection_area_bev(a, b)
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, max(0.0, inter / union))


def iou_3d(a: Box3D, b: Box3D) -> float:
    """Volume IoU; vertical extent of each box is [y_bottom - height, y_bottom]."""
    inter_base = intersection_area_bev(a.bev, b.bev)
    overlap_h = min(a.y_bottom, b.y_bottom) - max(
        a.y_bottom - a.height, b.y_bottom - b.height
    )
    inter = inter_base * max(0.0, overlap_h)
    union = a.bev.area * a.height + b.bev.area * b.height - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, max(0.0, inter / union))


def iou_2d_labels(a: ObjectLabel, b: ObjectLabel) -> float:
    return iou_2d(Rect2D(*a.box2d), Rect2D(*b.box2d))


def iou_bev_labels(a: ObjectLabel, b: ObjectLabel) -> float:
    return iou_bev(to_bev(a), to_bev(b))


def iou_3d_labels(a: ObjectLabel, b: ObjectLabel) -> float:
    return iou_3d(to_box3d(a), to_box3d(b))
