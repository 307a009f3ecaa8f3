import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toric_hdi import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba backend unavailable")


@needs_numba
@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda d: st.tuples(
            st.lists(st.integers(-3, 0), min_size=d, max_size=d),
            st.lists(st.integers(0, 3), min_size=d, max_size=d),
            st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), min_size=0, max_size=4),
            st.lists(st.integers(-3, 3), min_size=4, max_size=4),
        )
    )
)
def test_box_points_backends_agree(args):
    lo, hi, A, b = args
    b = b[: len(A)]
    d = len(lo)
    A = np.array(A, dtype=np.int64).reshape(-1, d)
    a = _kernels.box_points(lo, hi, A, b, backend="numpy")
    n = _kernels.box_points(lo, hi, A, b, backend="numba")
    assert np.array_equal(a, n)
    brute = [x for x in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))
             if all(int(np.dot(r, x)) >= c for r, c in zip(A, b))]
    assert [tuple(int(v) for v in p) for p in a] == brute


@needs_numba
@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), min_size=1, max_size=20),
    st.lists(st.integers(-4, 4), min_size=4, max_size=4),
)
def test_sign_masks_backends_agree(points, D):
    rays = np.array([(1, 0), (0, 1), (-1, 1), (0, -1)], dtype=np.int64)
    a = _kernels.sign_masks(points, rays, D, backend="numpy")
    n = _kernels.sign_masks(points, rays, D, backend="numba")
    assert np.array_equal(a, n)
    for p, m in zip(points, a):
        expect = sum(1 << r for r, u in enumerate(rays) if int(np.dot(p, u)) + D[r] < 0)
        assert int(m) == expect


def test_sign_masks_ray_limit():
    with pytest.raises(ValueError):
        _kernels.sign_masks([[0]], np.ones((63, 1), dtype=np.int64), np.zeros(63, dtype=np.int64))


def test_env_flag_selects_numpy():
    code = "from toric_hdi import _kernels; print(_kernels.BACKEND, _kernels.HAVE_NUMBA)"
    env = dict(os.environ, TORIC_HDI_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]


def test_empty_inputs():
    assert _kernels.bareiss_rank([]) == 0
    assert _kernels.box_points([1], [0], np.zeros((0, 1)), []).shape[0] == 0
