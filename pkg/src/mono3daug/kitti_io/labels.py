"""KITTI label-file parsing and canonical serialization.

One object per line, whitespace separated: type, truncated, occluded, alpha,
bbox (4), dimensions (3: h, w, l), location (3: x, y, z), rotation_y, and an
optional trailing score (predictions only).  Serialization prints every real
with exactly two decimals, so parse(serialize(x)) is the 2-decimal
quantization of x and serialization is idempotent after one pass.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from mono3daug.core.types import ObjectLabel, wrap_angle
from mono3daug.errors import IoFailure, MalformedLine

_GT_FIELDS = 15
_PRED_FIELDS = 16


def _parse_float(token: str, what: str, line_no, path) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MalformedLine(f"non-numeric {what}: {token!r}", line_no, path) from None
    if not math.isfinite(value):
        raise MalformedLine(f"non-finite {what}: {token!r}", line_no, path)
    return value


def parse_label_line(line: str, line_no: int | None = None, path=None) -> ObjectLabel:
    """Parse one label line; raises MalformedLine on any defect.

    Out-of-range alpha and rotation_y are accepted and wrapped into [-pi, pi).
    """
    tokens = line.split()
    if len(tokens) not in (_GT_FIELDS, _PRED_FIELDS):
        raise MalformedLine(
            f"expected {_GT_FIELDS} or {_PRED_FIELDS} fields, got {len(tokens)}",
            line_no,
            path,
        )
    values = [
        _parse_float(tok, f"field {i + 2}", line_no, path)
        for i, tok in enumerate(tokens[1:])
    ]
    score = values[14] if len(tokens) == _PRED_FIELDS else None
    return ObjectLabel(
        class_name=tokens[0],
        truncation=values[0],
        occlusion=int(values[1]),
        alpha=wrap_angle(values[2]),
        box2d=(values[3], values[4], values[5], values[6]),
        dims3d=(values[7], values[8], values[9]),
        location3d=(values[10], values[11], values[12]),
        rotation_y=wrap_angle(values[13]),
        score=score,
    )


def serialize_label(label: ObjectLabel) -> str:
    parts = [
        label.class_name,
        f"{label.truncation:.2f}",
        f"{label.occlusion:d}",
        f"{label.alpha:.2f}",
        *(f"{v:.2f}" for v in label.box2d),
        *(f"{v:.2f}" for v in label.dims3d),
        *(f"{v:.2f}" for v in label.location3d),
        f"{label.rotation_y:.2f}",
    ]
    if label.score is not None:
        parts.append(f"{label.score:.2f}")
    return " ".join(parts)


def quantize_label(label: ObjectLabel) -> ObjectLabel:
    """The label as it survives one serialize/parse round trip."""
    return parse_label_line(serialize_label(label))


def read_label_file(path) -> list[ObjectLabel]:
    """Parse a label file; an empty (or whitespace-only) file means no objects."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read label file {path}: {exc}") from exc
    labels = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        labels.append(parse_label_line(line, line_no, path))
    return labels


def write_label_file(path, labels: Iterable[ObjectLabel]) -> None:
    path = Path(path)
    body = "".join(serialize_label(lab) + "\n" for lab in labels)
    try:
        path.write_text(body, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write label file {path}: {exc}") from exc
