"""Exact rational polyhedra given by inequalities.

A polyhedron is a list of constraints ``<normal, x> >= rhs`` (or ``>`` when
strict). Vertices are found by brute force over d-subsets of constraints,
lattice points by scanning a bounding box. Constraint counts stay below
about fifteen, so the exponential enumeration is cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .linalg import integer_kernel, primitive, rational_rank, IntMatrix


class NotMonotone(ValueError):
    """The region is not closed under increasing coordinates."""


class NotPointed(ValueError):
    """The constraint normals do not span the ambient space."""


class Constraint(NamedTuple):
    normal: tuple[int, ...]
    rhs: int
    strict: bool = False

    def holds(self, x: Sequence) -> bool:
        v = sum(a * b for a, b in zip(self.normal, x))
        return v > self.rhs if self.strict else v >= self.rhs


@dataclass(frozen=True)
class HPolyhedron:
    """``{x in R^dim : every constraint holds}``."""

    dim: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        cons = tuple(
            Constraint(tuple(int(a) for a in c[0]), int(c[1]), bool(c[2]) if len(c) > 2 else False)
            for c in self.constraints
        )
        for c in cons:
            if len(c.normal) != self.dim:
                raise ValueError(f"normal {c.normal} does not have dimension {self.dim}")
        object.__setattr__(self, "constraints", cons)

    def contains(self, x: Sequence) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def with_constraints(self, extra: Iterable) -> "HPolyhedron":
        return HPolyhedron(self.dim, self.constraints + tuple(extra))


@dataclass(frozen=True)
class PolyhedronDecomposition:
    """Minkowski decomposition ``conv(vertices) + cone(recession_rays)``."""

    vertices: tuple[tuple[Fraction, ...], ...]
    recession_rays: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.recession_rays


def tighten_strict(P: HPolyhedron) -> HPolyhedron:
    """Replace each ``<n, x> > r`` by ``<n, x> >= r + 1``.

    Valid for integer data: the integer points are unchanged.
    """
    return HPolyhedron(
        P.dim,
        tuple(Constraint(c.normal, c.rhs + 1, False) if c.strict else c for c in P.constraints),
    )


def _det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = M
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    # Bareiss determinant for larger systems
    a = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _cramer(N: list[list[int]], r: list[int]):
    """Solve the square system ``N x = r``; returns (numerators, den) or None."""
    den = _det(N)
    if den == 0:
        return None
    d = len(N)
    nums = []
    for j in range(d):
        Mj = [row[:j] + [r[i]] + row[j + 1 :] for i, row in enumerate(N)]
        nums.append(_det(Mj))
    if den < 0:
        den, nums = -den, [-x for x in nums]
    return nums, den


def decompose(P: HPolyhedron) -> PolyhedronDecomposition:
    """Vertices and recession rays of a pointed polyhedron.

    Raises:
        ValueError: if strict constraints are present.
        NotPointed: if the normals do not span R^dim (no vertices exist
            even though the polyhedron may be nonempty).
    """
    if any(c.strict for c in P.constraints):
        raise ValueError("decompose needs non-strict constraints; apply tighten_strict first")
    d = P.dim
    normals = [list(c.normal) for c in P.constraints]
    rhs = [c.rhs for c in P.constraints]
    if d == 0:
        return PolyhedronDecomposition(((),) if all(r <= 0 for r in rhs) else ())
    if len(normals) < d or rational_rank(normals) < d:
        raise NotPointed(f"constraint normals do not span R^{d}")

    seen = set()
    for sub in itertools.combinations(range(len(normals)), d):
        sol = _cramer([normals[i] for i in sub], [rhs[i] for i in sub])
        if sol is None:
            continue
        nums, den = sol
        key = (tuple(nums), den)
        if key in seen:
            continue
        if all(sum(a * x for a, x in zip(nv, nums)) >= r * den for nv, r in zip(normals, rhs)):
            seen.add(key)
    vertices = sorted({tuple(Fraction(x, den) for x in nums) for nums, den in seen})
    if not vertices:
        return PolyhedronDecomposition(())

    rays = set()
    for sub in itertools.combinations(range(len(normals)), d - 1):
        M = IntMatrix.from_rows([normals[i] for i in sub], cols=d)
        K = integer_kernel(M)
        if K.cols != 1:
            continue
        r = primitive(K.column(0))
        for cand in (r, tuple(-x for x in r)):
            if all(sum(a * x for a, x in zip(nv, cand)) >= 0 for nv in normals):
                rays.add(cand)
    return PolyhedronDecomposition(tuple(vertices), tuple(sorted(rays)))


def hull_inequalities(vertices: Sequence[Sequence[Fraction]]) -> list[tuple[tuple[int, ...], int]]:
    """Integer inequalities ``<n, x> >= c`` cutting out conv(vertices).

    Affine-hull equations are returned as pairs of opposite inequalities.
    """
    d = len(vertices[0])
    L = 1
    for v in vertices:
        for x in v:
            L = math.lcm(L, Fraction(x).denominator)
    W = [[int(Fraction(x) * L) for x in v] for v in vertices]
    w0 = W[0]
    diffs = [[a - b for a, b in zip(w, w0)] for w in W[1:]]
    eqs = []
    if diffs:
        K = integer_kernel(IntMatrix.from_rows(diffs, cols=d))
        eqs = [list(K.column(j)) for j in range(K.cols)]
    else:
        eqs = [[int(i == j) for j in range(d)] for i in range(d)]
    e = d - len(eqs)

    out = []
    for n in eqs:
        c = sum(a * b for a, b in zip(n, w0))
        out.append((tuple(L * a for a in n), c))
        out.append((tuple(-L * a for a in n), -c))
    if e == 0:
        return out

    facets = set()
    for T in itertools.combinations(range(len(W)), e):
        t0 = W[T[0]]
        rows = [[a - b for a, b in zip(W[t], t0)] for t in T[1:]] + eqs
        K = integer_kernel(IntMatrix.from_rows(rows, cols=d))
        if K.cols != 1:
            continue
        n = primitive(K.column(0))
        c = sum(a * b for a, b in zip(n, t0))
        vals = [sum(a * b for a, b in zip(n, w)) for w in W]
        if all(v >= c for v in vals):
            facets.add((n, c))
        elif all(v <= c for v in vals):
            facets.add((tuple(-a for a in n), -c))
    for n, c in sorted(facets):
        out.append((tuple(L * a for a in n), c))
    return out


def _scan(lo, hi, ineqs) -> list[tuple[int, ...]]:
    if any(l > h for l, h in zip(lo, hi)):
        return []
    d = len(lo)
    A = np.array([n for n, _ in ineqs], dtype=np.int64).reshape(-1, d)
    b = np.array([c for _, c in ineqs], dtype=np.int64)
    pts = _kernels.box_points(lo, hi, A, b)
    return [tuple(int(x) for x in p) for p in pts]


def lattice_points_of_polytope(vertices) -> list[tuple[int, ...]]:
    """Integer points of conv(vertices), sorted lexicographically."""
    if not vertices:
        return []
    d = len(vertices[0])
    if d == 0:
        return [()]
    lo = [math.ceil(min(v[k] for v in vertices)) for k in range(d)]
    hi = [math.floor(max(v[k] for v in vertices)) for k in range(d)]
    return _scan(lo, hi, hull_inequalities(vertices))


def bounded_part_lattice_points(P: HPolyhedron) -> list[tuple[int, ...]]:
    """Integer points of conv(vertices(P)), deduplicated and sorted."""
    dec = decompose(P)
    return lattice_points_of_polytope(dec.vertices)


def integer_points(P: HPolyhedron) -> list[tuple[int, ...]]:
    """All integer points of a bounded polyhedron.

    Raises:
        ValueError: if P is unbounded and nonempty.
    """
    dec = decompose(tighten_strict(P))
    if dec.is_empty:
        return []
    if not dec.is_bounded:
        raise ValueError("polyhedron is unbounded")
    return lattice_points_of_polytope(dec.vertices)


def _minimal_elements(points: np.ndarray) -> list[tuple[int, ...]]:
    if len(points) == 0:
        return []
    order = np.lexsort(points.T[::-1])
    points = points[order]
    points = points[np.argsort(points.sum(axis=1), kind="stable")]
    gens = np.zeros((0, points.shape[1]), dtype=np.int64)
    for p in points:
        if len(gens) and np.any(np.all(gens <= p, axis=1)):
            continue
        gens = np.vstack([gens, p])
    return sorted(tuple(int(x) for x in g) for g in gens)


def minimal_integer_solutions(P: HPolyhedron) -> list[tuple[int, ...]]:
    """Componentwise-minimal points of ``P ∩ Z^d_{>=0}``.

    Any minimal point x equals the rounding-up of some point of the bounded
    part of ``P ∩ R^d_{>=0}``, so scanning the box up to the rounded-up
    vertex maxima (plus one for safety) finds them all. The domination
    property is then checked on a box one larger than the answer.

    Raises:
        NotMonotone: if some constraint normal has a negative entry.
    """
    P = tighten_strict(P)
    d = P.dim
    for c in P.constraints:
        if any(a < 0 for a in c.normal):
            raise NotMonotone(f"constraint {c.normal} >= {c.rhs} is not monotone")
    Q = P.with_constraints(Constraint(tuple(int(i == j) for j in range(d)), 0) for i in range(d))
    dec = decompose(Q)
    if dec.is_empty:
        return []
    ineqs = [(c.normal, c.rhs) for c in Q.constraints]
    hi = [math.ceil(max(v[k] for v in dec.vertices)) + 1 for k in range(d)]
    pts = np.array(_scan([0] * d, hi, ineqs), dtype=np.int64).reshape(-1, d)
    gens = _minimal_elements(pts)

    g = np.array(gens, dtype=np.int64).reshape(-1, d)
    check_hi = [int(g[:, k].max()) + 1 for k in range(d)]
    for p in _scan([0] * d, check_hi, ineqs):
        if not np.any(np.all(g <= np.array(p), axis=1)):
            raise AssertionError(f"integer point {p} dominates no generator")
    return gens
