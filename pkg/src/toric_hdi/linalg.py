"""Exact integer and rational linear algebra.

Matrices are small (at most a few dozen rows) so everything here works on
Python integers. The fraction-free rank routine can hand off to the
compiled kernels in :mod:`toric_hdi._kernels` when the entries are
guaranteed to fit in 64 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernels


class TorsionCokernel(ValueError):
    """Raised when a cokernel has torsion, so no integral projection exists."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with an explicit shape.

    The shape is stored separately so that empty matrices such as 0x2 keep
    their column count.
    """

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"entry count does not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count is required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple((() for _ in range(self.cols))))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.T().data
            return IntMatrix(
                self.rows,
                other.cols,
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.data),
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} against {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.data)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(idx), self.cols, tuple(self.data[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))


def as_matrix(a, cols: int | None = None) -> IntMatrix:
    """Coerce nested sequences (or an IntMatrix) to an IntMatrix."""
    if isinstance(a, IntMatrix):
        return a
    return IntMatrix.from_rows(a, cols)


@dataclass(frozen=True)
class SmithDecomposition:
    """Result of :func:`smith_normal_form`: ``U @ A @ V == S``."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _freeze(rows, cols):
    return IntMatrix(len(rows), cols, tuple(tuple(r) for r in rows))


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form by elementary operations.

    Pivots are chosen by minimal absolute value. Besides ``U`` and ``V`` the
    inverses are tracked alongside, since callers need sections of
    projections built from ``U``.

    Args:
        A: Integer matrix (IntMatrix or nested sequences).

    Returns:
        SmithDecomposition with unimodular ``U``, ``V`` and diagonal ``S``
        whose nonzero entries are positive and form a divisibility chain.
    """
    A = as_matrix(A)
    m, n = A.shape
    S = [list(r) for r in A.data]
    U, Ui = _eye(m), _eye(m)
    V, Vi = _eye(n), _eye(n)

    def swap_rows(i, j):
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for r in S:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if S[i][j] != 0 and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        if S[t][t] == 0:
            break

    return SmithDecomposition(
        U=_freeze(U, m), S=_freeze(S, n), V=_freeze(V, n), U_inv=_freeze(Ui, m), V_inv=_freeze(Vi, n)
    )


def row_hermite_form(P) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, W, W_inv)`` with ``W @ P == H``, ``W`` unimodular, pivots
    positive and entries above each pivot reduced into ``[0, pivot)``.
    """
    P = as_matrix(P)
    r, c = P.shape
    H = [list(x) for x in P.data]
    W, Wi = _eye(r), _eye(r)

    def swap(i, j):
        if i == j:
            return
        H[i], H[j] = H[j], H[i]
        W[i], W[j] = W[j], W[i]
        for x in Wi:
            x[i], x[j] = x[j], x[i]

    def add(dst, src, q):
        if q == 0:
            return
        H[dst] = [a + q * b for a, b in zip(H[dst], H[src])]
        W[dst] = [a + q * b for a, b in zip(W[dst], W[src])]
        for x in Wi:
            x[src] -= q * x[dst]

    def negate(i):
        H[i] = [-a for a in H[i]]
        W[i] = [-a for a in W[i]]
        for x in Wi:
            x[i] = -x[i]

    row = 0
    for col in range(c):
        if row == r:
            break
        while True:
            nz = [i for i in range(row, r) if H[i][col] != 0]
            if not nz:
                break
            swap(row, min(nz, key=lambda i: abs(H[i][col])))
            for i in range(row + 1, r):
                if H[i][col]:
                    add(i, row, -(H[i][col] // H[row][col]))
            if all(H[i][col] == 0 for i in range(row + 1, r)):
                break
        if H[row][col] == 0:
            continue
        if H[row][col] < 0:
            negate(row)
        for i in range(row):
            add(i, row, -(H[i][col] // H[row][col]))
        row += 1
    return _freeze(H, c), _freeze(W, r), _freeze(Wi, r)


def cokernel_projection(A) -> tuple[IntMatrix, IntMatrix]:
    """Projection onto the cokernel of an injective integer map.

    For ``A`` of shape m x k with full column rank and torsion-free cokernel,
    returns ``(proj, section)`` with ``proj @ A == 0`` and
    ``proj @ section == I``. The projection is brought to row Hermite form so
    the result does not depend on pivoting accidents inside the SNF.

    Raises:
        ValueError: if ``A`` is not of full column rank.
        TorsionCokernel: if some elementary divisor exceeds 1.
    """
    A = as_matrix(A)
    m, k = A.shape
    snf = smith_normal_form(A)
    diag = snf.diagonal
    if snf.rank < k:
        raise ValueError(f"matrix of shape {m}x{k} has rank {snf.rank}, not full column rank")
    if any(d != 1 for d in diag):
        raise TorsionCokernel(f"cokernel has torsion (elementary divisors {list(diag)})")
    corank = m - k
    proj = snf.U.select_rows(range(k, m))
    section = snf.U_inv.select_cols(range(k, m))
    if corank == 0:
        return IntMatrix.zeros(0, m), IntMatrix.zeros(m, 0)
    H, _, W_inv = row_hermite_form(proj)
    section = section @ W_inv
    assert H @ A == IntMatrix.zeros(corank, k)
    assert H @ section == IntMatrix.identity(corank)
    return H, section


def solve_integer(A, b: Sequence[int]) -> tuple[int, ...] | None:
    """Find an integer ``x`` with ``A @ x == b``, or ``None`` if none exists.

    Free coordinates (when ``A`` is not injective) are set to zero in the
    SNF basis, so the answer is deterministic.
    """
    A = as_matrix(A)
    b = tuple(int(x) for x in b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    snf = smith_normal_form(A)
    c = snf.U @ b
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = snf.S[i, i] if i < min(A.shape) else 0
        if d == 0:
            if ci != 0:
                return None
            continue
        if ci % d:
            return None
        y[i] = ci // d
    x = snf.V @ y
    assert A @ x == b
    return x


def integer_kernel(A) -> IntMatrix:
    """Z-basis of the integer kernel of ``A``, returned as columns."""
    A = as_matrix(A)
    snf = smith_normal_form(A)
    return snf.V.select_cols(range(snf.rank, A.cols))


def _bareiss_rank_exact(rows: list[list[int]]) -> int:
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    row, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(row, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        for i in range(row + 1, m):
            ai = a[i]
            f = ai[col]
            for j in range(col + 1, n):
                ai[j] = (ai[j] * p - f * a[row][j]) // prev
            ai[col] = 0
        prev = p
        row += 1
        if row == m:
            break
    return row


def _fits_int64(rows) -> bool:
    # Every intermediate Bareiss entry is a minor, so it is bounded by the
    # Hadamard bound H (product of column norms). The products formed before
    # each exact division are bounded by H**2, which must stay below 2**63.
    if not rows or not rows[0]:
        return True
    bits = 0.0
    for col in zip(*rows):
        s = sum(x * x for x in col)
        if s:
            bits += math.log2(s)
    return bits < 60


def rational_rank(A) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    if isinstance(A, IntMatrix):
        rows = [list(r) for r in A.data]
    else:
        rows = [list(map(int, r)) for r in A]
    if not rows or not rows[0]:
        return 0
    if _fits_int64(rows):
        return _kernels.bareiss_rank(rows)
    return _bareiss_rank_exact(rows)


def rational_solve(A, b) -> tuple[Fraction, ...] | None:
    """Unique rational solution of a square nonsingular system, else ``None``."""
    A = as_matrix(A)
    n = A.rows
    M = [[Fraction(x) for x in r] + [Fraction(int(bi))] for r, bi in zip(A.data, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return tuple(M[i][n] for i in range(n))


def determinant(A) -> int:
    """Exact determinant of a square integer matrix."""
    A = as_matrix(A)
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    rows = [[Fraction(x) for x in r] for r in A.data]
    n, det = A.rows, Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det *= p
        for i in range(col + 1, n):
            f = rows[i][col] / p
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return int(det)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = math.gcd(*v) if v else 0
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out
