"""Hot integer kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time. Set ``TORIC_HDI_NUMBA=0`` to force
the numpy path (numba is also skipped automatically when it cannot be
imported). Both paths work on int64 arrays; callers are responsible for
making sure values fit (see ``linalg._fits_int64``).

Kernels:
    bareiss_rank: rank of an integer matrix by fraction-free elimination.
    box_points: integer points of a box satisfying ``A x >= b``.
    sign_masks: per point, bitmask of rays with ``<m, u> + D < 0``.
"""

from __future__ import annotations

import os

import numpy as np

_want_numba = os.environ.get("TORIC_HDI_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _want_numba:
        raise ImportError("numba disabled by TORIC_HDI_NUMBA")
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def set_threads(n: int | None) -> None:
    """Set the numba thread count (no-op on the numpy backend)."""
    if n and HAVE_NUMBA:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


# numpy implementations


def _bareiss_rank_np(a: np.ndarray) -> int:
    a = a.copy()
    m, n = a.shape
    row, prev = 0, 1
    for col in range(n):
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        p = a[row, col]
        if row + 1 < m:
            below = a[row + 1 :, col + 1 :]
            below *= p
            below -= np.outer(a[row + 1 :, col], a[row, col + 1 :])
            below //= prev
            a[row + 1 :, col] = 0
        prev = p
        row += 1
        if row == m:
            break
    return int(row)


def _box_points_np(lo, hi, A, b):
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    if any(ax.size == 0 for ax in axes):
        return np.zeros((0, len(lo)), dtype=np.int64)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))
    if A.shape[0] == 0:
        return grid
    ok = np.all(grid @ A.T >= b, axis=1)
    return grid[ok]


def _sign_masks_np(points, rays, offsets):
    vals = points @ rays.T + offsets
    weights = np.left_shift(np.int64(1), np.arange(rays.shape[0], dtype=np.int64))
    return ((vals < 0).astype(np.int64) * weights).sum(axis=1)


# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _bareiss_rank_nb(a):
        a = a.copy()
        m, n = a.shape
        row = 0
        prev = 1
        for col in range(n):
            piv = -1
            for i in range(row, m):
                if a[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != row:
                for j in range(n):
                    t = a[row, j]
                    a[row, j] = a[piv, j]
                    a[piv, j] = t
            p = a[row, col]
            for i in range(row + 1, m):
                f = a[i, col]
                for j in range(col + 1, n):
                    a[i, j] = (a[i, j] * p - f * a[row, j]) // prev
                a[i, col] = 0
            prev = p
            row += 1
            if row == m:
                break
        return row

    @njit(cache=True)
    def _box_points_nb(lo, hi, A, b):
        d = lo.shape[0]
        total = 1
        for k in range(d):
            w = hi[k] - lo[k] + 1
            if w <= 0:
                return np.zeros((0, d), dtype=np.int64)
            total *= w
        out = np.empty((total, d), dtype=np.int64)
        cur = lo.copy()
        count = 0
        for _ in range(total):
            ok = True
            for r in range(A.shape[0]):
                s = 0
                for k in range(d):
                    s += A[r, k] * cur[k]
                if s < b[r]:
                    ok = False
                    break
            if ok:
                for k in range(d):
                    out[count, k] = cur[k]
                count += 1
            # odometer, last coordinate fastest (matches meshgrid "ij" order)
            k = d - 1
            while k >= 0:
                cur[k] += 1
                if cur[k] <= hi[k]:
                    break
                cur[k] = lo[k]
                k -= 1
        return out[:count]

    @njit(cache=True)
    def _sign_masks_nb(points, rays, offsets):
        npts = points.shape[0]
        out = np.zeros(npts, dtype=np.int64)
        for p in range(npts):
            mask = 0
            for r in range(rays.shape[0]):
                s = offsets[r]
                for k in range(rays.shape[1]):
                    s += points[p, k] * rays[r, k]
                if s < 0:
                    mask |= 1 << r
            out[p] = mask
        return out


def _as_i64(x, ndim):
    arr = np.asarray(x, dtype=np.int64)
    if ndim == 2 and arr.ndim == 1:
        arr = arr.reshape((0, 0) if arr.size == 0 else (1, -1))
    return np.ascontiguousarray(arr)


def bareiss_rank(rows, backend: str | None = None) -> int:
    a = _as_i64(rows, 2)
    if a.size == 0:
        return 0
    if (backend or BACKEND) == "numba" and HAVE_NUMBA:
        return int(_bareiss_rank_nb(a))
    return _bareiss_rank_np(a)


def box_points(lo, hi, A, b, backend: str | None = None) -> np.ndarray:
    """Integer points ``x`` with ``lo <= x <= hi`` and ``A @ x >= b``.

    Rows come out in lexicographic order.
    """
    lo = _as_i64(lo, 1)
    hi = _as_i64(hi, 1)
    A = np.asarray(A, dtype=np.int64).reshape(-1, lo.shape[0])
    b = _as_i64(b, 1)
    if (backend or BACKEND) == "numba" and HAVE_NUMBA:
        return _box_points_nb(lo, hi, np.ascontiguousarray(A), b)
    return _box_points_np(lo, hi, A, b)


def sign_masks(points, rays, offsets, backend: str | None = None) -> np.ndarray:
    """Bitmask per point of the rays with ``<p, u_r> + offsets[r] < 0``."""
    rays = np.ascontiguousarray(np.asarray(rays, dtype=np.int64))
    points = np.ascontiguousarray(np.asarray(points, dtype=np.int64).reshape(-1, rays.shape[1]))
    offsets = _as_i64(offsets, 1)
    if rays.shape[0] > 62:
        raise ValueError("sign masks support at most 62 rays")
    if (backend or BACKEND) == "numba" and HAVE_NUMBA:
        return _sign_masks_nb(points, rays, offsets)
    return _sign_masks_np(points, rays, offsets)
