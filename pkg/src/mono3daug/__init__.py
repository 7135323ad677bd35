"""mono3daug: deterministic KITTI-format 2D augmentation and detection
metrics for monocular 3D object detection datasets.

The augmentations (cutout, photometric, box-level mixup, box-level
cut-paste, mosaic tiling) edit images and 2D boxes only; surviving labels
keep their 3D geometry bit-identical.  The evaluator scores KITTI-style
predictions with per-class AP, mAP, and inverse-class-frequency-weighted
mAP over BEV and 3D IoU.
"""

__version__ = "0.1.0"
