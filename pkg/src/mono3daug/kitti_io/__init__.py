from mono3daug.kitti_io.dataset import (
    IMAGE_DIR,
    LABEL_DIR,
    DatasetIndex,
    SplitManifest,
    load_image,
    load_sample,
    write_sample,
)
from mono3daug.kitti_io.labels import (
    parse_label_line,
    quantize_label,
    read_label_file,
    serialize_label,
    write_label_file,
)

__all__ = [
    "IMAGE_DIR",
    "LABEL_DIR",
    "DatasetIndex",
    "SplitManifest",
    "load_image",
    "load_sample",
    "parse_label_line",
    "quantize_label",
    "read_label_file",
    "serialize_label",
    "write_label_file",
    "write_sample",
]
