#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallback.

Run from the repository root:

    python3 scripts/benchmark_kernels.py
"""

import timeit

import numpy as np

from facepipe import _kernels_py

try:
    from facepipe import _ckernels
except ImportError:
    _ckernels = None


def bench(label, fn, number):
    best = min(timeit.repeat(fn, number=number, repeat=5)) / number
    print(f"  {label:<10} {best * 1e6:10.1f} us/call")
    return best


def main():
    rng = np.random.default_rng(0)
    boxes_a = np.column_stack(
        [rng.uniform(0, 500, 64), rng.uniform(0, 500, 64),
         rng.uniform(5, 60, 64), rng.uniform(5, 60, 64)]
    )
    boxes_b = boxes_a[::-1].copy()
    image = rng.random((480, 640))
    resp = rng.random((64, 64))

    cases = [
        ("pairwise_iou 64x64", lambda m: m.pairwise_iou(boxes_a, boxes_b), 2000),
        ("bilinear_crop 64px", lambda m: m.bilinear_crop(image, 320.0, 240.0, 96.0, 64), 2000),
        ("sidelobe_stats", lambda m: m.sidelobe_stats(resp, 32, 32, 5), 5000),
    ]
    for name, call, number in cases:
        print(name)
        pure = bench("python", lambda: call(_kernels_py), number)
        if _ckernels is None:
            print("  cython     (extension not built)")
            continue
        fast = bench("cython", lambda: call(_ckernels), number)
        print(f"  speedup    {pure / fast:10.1f}x")


if __name__ == "__main__":
    main()
