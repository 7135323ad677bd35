#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs each pixel kernel on full-size 1242x375 frames, verifies both backends
produce bit-identical outputs, and reports per-call times.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mono3daug import kernels


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    height, width = 375, 1242
    img_a = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    img_b = rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)
    boxes = np.array(
        [[80, 40, 400, 300], [500, 100, 900, 350], [1000, 0, 1242, 200]],
        dtype=np.int64,
    )
    mask = kernels.rasterize_boxes(boxes, height, width)
    means = img_a.mean(axis=(0, 1), dtype=np.float64)

    cases = {
        "rasterize_boxes": lambda impl: impl.rasterize_boxes(boxes, height, width),
        "blend_mean_masked": lambda impl: impl.blend_mean_masked(img_a, img_b, mask),
        "blend_copy_masked": lambda impl: impl.blend_copy_masked(img_a, img_b, mask),
        "motion_blur(9)": lambda impl: impl.motion_blur(img_a, 9, 1, -1),
        "shift_channels": lambda impl: impl.shift_channels(img_a, 12, -7, 3),
        "scale_contrast": lambda impl: impl.scale_contrast(img_a, 1.17, means),
    }

    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    if "native" not in backends:
        print("compiled kernels unavailable; timing the python backend only")

    print(f"image {width}x{height}, best of {args.repeat} runs, times in ms")
    header = f"{'kernel':<20}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for case_name, make_call in cases.items():
        outs = {}
        times = {}
        for name, impl in backends.items():
            outs[name] = make_call(impl)
            times[name] = _time(lambda: make_call(impl), args.repeat)
        if len(outs) == 2 and not np.array_equal(outs["native"], outs["python"]):
            raise SystemExit(f"backend outputs differ for {case_name}")
        row = f"{case_name:<20}" + "".join(
            f"{1000 * times[name]:>12.3f}" for name in backends
        )
        if len(backends) == 2:
            row += f"{times['python'] / times['native']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
