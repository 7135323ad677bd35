"""Shared builders for synthetic samples, datasets, and digests."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from mono3daug.core.types import ObjectLabel, PixelImage, Sample
from mono3daug.kitti_io.dataset import write_sample


def make_label(
    cls="Car",
    box=(0.0, 0.0, 10.0, 10.0),
    trunc=0.0,
    occ=0,
    alpha=0.1,
    dims=(1.5, 1.6, 3.9),
    loc=(1.0, 1.7, 10.0),
    ry=0.2,
    score=None,
):
    return ObjectLabel(
        class_name=cls,
        truncation=trunc,
        occlusion=occ,
        alpha=alpha,
        box2d=box,
        dims3d=dims,
        location3d=loc,
        rotation_y=ry,
        score=score,
    )


def random_image(rs: np.random.Generator, width: int, height: int) -> PixelImage:
    return PixelImage(rs.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


def random_box(rs: np.random.Generator, width: int, height: int, min_side=1.0):
    left = rs.uniform(0.0, width - min_side)
    top = rs.uniform(0.0, height - min_side)
    right = rs.uniform(left + min_side, width)
    bottom = rs.uniform(top + min_side, height)
    return (left, top, right, bottom)


def random_sample(
    rs: np.random.Generator,
    sample_id: str,
    width: int,
    height: int,
    n_boxes: int,
    classes=("Car", "Pedestrian"),
) -> Sample:
    labels = []
    for k in range(n_boxes):
        labels.append(
            make_label(
                cls=classes[int(rs.integers(0, len(classes)))],
                box=random_box(rs, width, height),
                loc=(float(rs.uniform(-20, 20)), float(rs.uniform(0, 3)), float(rs.uniform(5, 60))),
                ry=float(rs.uniform(-3.1, 3.1)),
                alpha=float(rs.uniform(-3.1, 3.1)),
            )
        )
    return Sample(id=sample_id, image=random_image(rs, width, height), labels=tuple(labels))


def write_dataset(root, samples) -> Path:
    root = Path(root)
    for sample in samples:
        write_sample(sample, root)
    return root


def write_split(path, ids) -> Path:
    path = Path(path)
    path.write_text("".join(i + "\n" for i in ids), encoding="utf-8")
    return path


def tree_digest(root) -> str:
    """Digest of every file (relative path + bytes) under a directory."""
    root = Path(root)
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(path.relative_to(root)).encode())
        digest.update(b"\0")
        digest.update(path.read_bytes())
        digest.update(b"\1")
    return digest.hexdigest()


def random_detection_fixture(
    rs: np.random.Generator,
    n_frames: int = 3,
    max_gts: int = 6,
    classes=("Car", "Pedestrian", "Cyclist"),
):
    """Synthetic (gt_by_id, pred_by_id) with planted matches, misses, FPs,
    and occasional DontCare regions."""
    gt_by_id = {}
    pred_by_id = {}
    for f in range(n_frames):
        fid = f"{f:06d}"
        gts = []
        preds = []
        for _ in range(int(rs.integers(1, max_gts + 1))):
            cls = classes[int(rs.integers(0, len(classes)))]
            x0, y0 = rs.uniform(0, 900), rs.uniform(0, 200)
            w, h = rs.uniform(15, 120), rs.uniform(20, 120)
            loc = (
                float(rs.uniform(-25, 25)),
                float(rs.uniform(1, 2.5)),
                float(rs.uniform(4, 70)),
            )
            dims = (
                float(rs.uniform(1, 2.2)),
                float(rs.uniform(0.4, 2.0)),
                float(rs.uniform(0.6, 4.5)),
            )
            label = make_label(
                cls=cls,
                box=(x0, y0, x0 + w, y0 + h),
                occ=int(rs.integers(0, 4)),
                trunc=float(rs.uniform(0, 0.6)),
                loc=loc,
                dims=dims,
                ry=float(rs.uniform(-3, 3)),
            )
            gts.append(label)
            roll = rs.random()
            if roll < 0.7:  # matching detection with jitter
                jitter = rs.uniform(-3, 3, size=4)
                loc_j = (
                    loc[0] + float(rs.uniform(-0.4, 0.4)),
                    loc[1],
                    loc[2] + float(rs.uniform(-0.4, 0.4)),
                )
                preds.append(
                    make_label(
                        cls=cls,
                        box=tuple(np.array(label.box2d) + jitter),
                        score=float(rs.uniform(0, 1)),
                        loc=loc_j,
                        dims=dims,
                        ry=label.rotation_y,
                    )
                )
            if roll > 0.55:  # an unrelated false positive
                fx, fy = rs.uniform(1000, 1200), rs.uniform(250, 350)
                preds.append(
                    make_label(
                        cls=cls,
                        box=(fx, fy, fx + 30, fy + 40),
                        score=float(rs.uniform(0, 1)),
                        loc=(float(rs.uniform(30, 60)), 1.7, float(rs.uniform(80, 120))),
                    )
                )
        if rs.random() < 0.4:
            dc_x = rs.uniform(0, 900)
            gts.append(
                make_label(
                    cls="DontCare",
                    box=(dc_x, 0, dc_x + 50, 40),
                    dims=(-1, -1, -1),
                    occ=-1,
                )
            )
        gt_by_id[fid] = gts
        pred_by_id[fid] = preds
    return gt_by_id, pred_by_id
