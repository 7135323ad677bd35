"""Dataset directory indexing, PNG sample loading/writing, split manifests.

Layout follows the KITTI object benchmark: images under ``image_2/<id>.png``
and labels under ``label_2/<id>.txt``, ids being zero-padded 6-digit strings.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from mono3daug.core.types import ObjectLabel, PixelImage, Sample
from mono3daug.errors import CorruptImage, IdMismatch, IoFailure, MissingFile, MissingSample
from mono3daug.kitti_io.labels import read_label_file, write_label_file

log = logging.getLogger(__name__)

IMAGE_DIR = "image_2"
LABEL_DIR = "label_2"

_ID_PNG_RE = re.compile(r"(\d{6})\.png")


@dataclass(frozen=True)
class DatasetIndex:
    """Immutable view of a dataset directory: sorted ids plus path lookup."""

    root: Path
    ids: tuple[str, ...]

    @classmethod
    def scan(cls, root) -> "DatasetIndex":
        root = Path(root)
        image_dir = root / IMAGE_DIR
        if not image_dir.is_dir():
            raise MissingFile(f"image directory not found: {image_dir}")
        ids = sorted(
            m.group(1)
            for p in image_dir.iterdir()
            if (m := _ID_PNG_RE.fullmatch(p.name))
        )
        return cls(root=root, ids=tuple(ids))

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, sample_id: str) -> bool:
        return sample_id in set(self.ids)

    def image_path(self, sample_id: str) -> Path:
        return self.root / IMAGE_DIR / f"{sample_id}.png"

    def label_path(self, sample_id: str) -> Path:
        return self.root / LABEL_DIR / f"{sample_id}.txt"


@dataclass(frozen=True)
class SplitManifest:
    """A named subset of sample ids, one id per line on disk."""

    name: str
    ids: tuple[str, ...]

    @classmethod
    def load(cls, path) -> "SplitManifest":
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise MissingFile(f"cannot read split manifest {path}: {exc}") from exc
        ids = tuple(line.strip() for line in lines if line.strip())
        if len(set(ids)) != len(ids):
            raise IdMismatch(f"split manifest {path} contains duplicate ids")
        return cls(name=path.stem, ids=ids)

    def save(self, path) -> None:
        Path(path).write_text("".join(i + "\n" for i in self.ids), encoding="utf-8")

    def validate_against(self, index: DatasetIndex) -> None:
        known = set(index.ids)
        unknown = [i for i in self.ids if i not in known]
        if unknown:
            raise IdMismatch(
                f"split {self.name!r} lists ids missing from the dataset: "
                + ", ".join(unknown[:5])
                + ("..." if len(unknown) > 5 else "")
            )


def _clip_labels(labels, width: int, height: int, sample_id: str):
    clipped = []
    dropped = 0
    for lab in labels:
        left, top, right, bottom = lab.box2d
        left = min(max(left, 0.0), float(width))
        right = min(max(right, 0.0), float(width))
        top = min(max(top, 0.0), float(height))
        bottom = min(max(bottom, 0.0), float(height))
        if right - left <= 0.0 or bottom - top <= 0.0:
            dropped += 1
            continue
        if (left, top, right, bottom) != lab.box2d:
            lab = ObjectLabel(
                class_name=lab.class_name,
                truncation=lab.truncation,
                occlusion=lab.occlusion,
                alpha=lab.alpha,
                box2d=(left, top, right, bottom),
                dims3d=lab.dims3d,
                location3d=lab.location3d,
                rotation_y=lab.rotation_y,
                score=lab.score,
            )
        clipped.append(lab)
    if dropped:
        log.warning("sample %s: dropped %d zero-area label(s) after clipping", sample_id, dropped)
    return clipped


def load_image(path) -> PixelImage:
    """Decode a PNG to 8-bit RGB (grayscale inputs are expanded)."""
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError as exc:
        raise MissingFile(str(exc)) from exc
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise CorruptImage(f"cannot decode image {path}: {exc}") from exc
    return PixelImage(arr)


def load_sample(index: DatasetIndex, sample_id: str) -> Sample:
    """Load a frame; 2D boxes are clipped to the image and zero-area ones dropped."""
    if sample_id not in index:
        raise MissingSample(f"sample {sample_id!r} not in index of {index.root}")
    image = load_image(index.image_path(sample_id))
    label_path = index.label_path(sample_id)
    labels = read_label_file(label_path) if label_path.is_file() else []
    labels = _clip_labels(labels, image.width, image.height, sample_id)
    return Sample(id=sample_id, image=image, labels=tuple(labels))


def write_sample(sample, out_root) -> None:
    """Write image and labels under the KITTI layout rooted at out_root."""
    out_root = Path(out_root)
    try:
        (out_root / IMAGE_DIR).mkdir(parents=True, exist_ok=True)
        (out_root / LABEL_DIR).mkdir(parents=True, exist_ok=True)
        Image.fromarray(sample.image.pixels).save(
            out_root / IMAGE_DIR / f"{sample.id}.png", format="PNG"
        )
    except OSError as exc:
        raise IoFailure(f"cannot write sample {sample.id} under {out_root}: {exc}") from exc
    write_label_file(out_root / LABEL_DIR / f"{sample.id}.txt", sample.labels)
