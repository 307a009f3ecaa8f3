"""Compare the numba and numpy backends of the integer kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call of each kernel includes JIT compilation (or a cache
load); it is reported separately and excluded from the steady-state timing.
"""

import argparse
import time

import numpy as np

from toric_hdi import _kernels
from toric_hdi.fixtures import threefold_fan


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def workloads(rng):
    F = threefold_fan()
    rays = np.array(F.rays, dtype=np.int64)
    B = 30
    axes = [np.arange(-B, B + 1)] * 3
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3).astype(np.int64)
    D = rng.integers(-6, 7, size=F.s).astype(np.int64)
    # 10x10 with entries in [-2, 2] stays inside the int64 Hadamard guard
    mats = [rng.integers(-2, 3, size=(10, 10)).astype(np.int64) for _ in range(400)]
    A = rng.integers(-3, 4, size=(8, 3)).astype(np.int64)
    b = rng.integers(-40, 0, size=8).astype(np.int64)
    lo, hi = np.full(3, -25, dtype=np.int64), np.full(3, 25, dtype=np.int64)
    return {
        f"sign_masks ({len(pts)} points, {F.s} rays)": lambda backend: _kernels.sign_masks(pts, rays, D, backend=backend),
        "bareiss_rank (400 x 10x10)": lambda backend: [_kernels.bareiss_rank(m, backend=backend) for m in mats],
        "box_points (51^3 box, 8 inequalities)": lambda backend: _kernels.box_points(lo, hi, A, b, backend=backend),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"numba available: {_kernels.HAVE_NUMBA}; default backend: {_kernels.BACKEND}")
    print(f"{'kernel':<44}{'numpy':>10}{'numba':>10}{'speedup':>9}{'first call':>12}")
    for name, run in workloads(rng).items():
        t_np = _time(lambda: run("numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            t0 = time.perf_counter()
            first = run("numba")
            t_first = time.perf_counter() - t0
            ref = run("numpy")
            same = all(np.array_equal(x, y) for x, y in zip(first, ref)) if isinstance(ref, list) else np.array_equal(first, ref)
            assert same, f"backends disagree on {name}"
            t_nb = _time(lambda: run("numba"), args.repeat)
            print(f"{name:<44}{t_np * 1e3:>8.1f}ms{t_nb * 1e3:>8.1f}ms{t_np / t_nb:>8.1f}x{t_first * 1e3:>10.0f}ms")
        else:
            print(f"{name:<44}{t_np * 1e3:>8.1f}ms{'-':>10}{'-':>9}{'-':>12}")


if __name__ == "__main__":
    main()
