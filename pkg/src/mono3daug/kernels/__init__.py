"""Hot pixel kernels with a compiled core and a pure-Python (numpy) fallback.

The compiled extension is selected at import when available; both backends
produce bit-identical outputs (enforced by the test suite), so which one is
active never changes results, only speed.  Set MONO3DAUG_KERNELS=python or
=native to force a backend; see benchmarks/bench_kernels.py for a
comparison.
"""

import importlib
import os

from mono3daug.kernels import _fallback

_FORCED = os.environ.get("MONO3DAUG_KERNELS", "").strip().lower()

if _FORCED not in ("", "native", "python"):
    raise ValueError(
        f"MONO3DAUG_KERNELS must be 'native' or 'python', got {_FORCED!r}"
    )

_native = None
if _FORCED != "python":
    try:
        _native = importlib.import_module("mono3daug.kernels._native")
    except ImportError:
        if _FORCED == "native":
            raise

_impl = _native if _native is not None else _fallback
BACKEND = "native" if _native is not None else "python"

rasterize_boxes = _impl.rasterize_boxes
blend_mean_masked = _impl.blend_mean_masked
blend_copy_masked = _impl.blend_copy_masked
motion_blur = _impl.motion_blur
shift_channels = _impl.shift_channels
scale_contrast = _impl.scale_contrast


def available_backends() -> tuple[str, ...]:
    return ("native", "python") if _native is not None else ("python",)


def get_backend(name: str):
    """Return the backend module by name (for tests and benchmarks)."""
    if name == "python":
        return _fallback
    if name == "native":
        if _native is None:
            raise ImportError("compiled kernels are not available")
        return _native
    raise ValueError(f"unknown kernel backend {name!r}")
