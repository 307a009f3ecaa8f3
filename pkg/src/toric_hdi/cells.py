"""The cell complex P = X_{>=0} of a simplicial fan and reduced Čech cohomology.

Cells correspond to cones. A cone with k rays gives a cell of dimension
n - k, so maximal cones are vertices and the zero cone is the top cell. The
coboundary sends the cell of a cone c to the cells of the facets of c, with
sign (-1)^p when the deleted ray sits at sorted position p.

Every cohomology computation here restricts this coboundary to a set of
cells and takes ranks, so results are cached per cell set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .fan import Cone, Fan, NotSimplicial, ToricMorphism, all_cones, in_cone
from .linalg import rational_rank


@dataclass(frozen=True)
class SubcomplexMask:
    """A set of cells of P (given by their cones).

    ``shift`` is subtracted from cell dimensions when reporting cohomology;
    fibre subcomplexes over a non-maximal target cone start in a positive
    cell dimension.
    """

    cones: frozenset
    shift: int = 0

    def __len__(self):
        return len(self.cones)

    def f_vector(self, n: int) -> tuple[int, ...]:
        counts = [0] * (n + 1)
        for c in self.cones:
            counts[n - len(c)] += 1
        return tuple(counts[self.shift :]) if self.shift else tuple(counts)


class CellComplexP:
    """Cells of P with the deletion-sign incidence function.

    Attributes:
        fan: The fan.
        n: Lattice rank, also the dimension of P.
        cells: Cones ordered by cell dimension, then lexicographically.
        cell_dim: Cell dimension per cell index.
    """

    def __init__(self, fan: Fan):
        self.fan = fan
        self.n = fan.n
        cones = sorted(all_cones(fan), key=lambda c: (fan.n - len(c), c))
        self.cells: tuple[Cone, ...] = tuple(cones)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.cell_dim = tuple(fan.n - len(c) for c in self.cells)
        self.by_dim: list[list[int]] = [[] for _ in range(fan.n + 1)]
        for i, k in enumerate(self.cell_dim):
            self.by_dim[k].append(i)
        self._pos = {i: self.by_dim[k].index(i) for k in range(fan.n + 1) for i in self.by_dim[k]}
        self.incidence: dict[tuple[int, int], int] = {}
        for i, c in enumerate(self.cells):
            for p in range(len(c)):
                face = c[:p] + c[p + 1 :]
                self.incidence[(i, self.index[face])] = -1 if p % 2 else 1
        self._d = []
        for k in range(fan.n):
            M = np.zeros((len(self.by_dim[k + 1]), len(self.by_dim[k])), dtype=np.int64)
            for (i, j), e in self.incidence.items():
                if self.cell_dim[i] == k:
                    M[self._pos[j], self._pos[i]] = e
            self._d.append(M)
        self._cache: dict[frozenset, tuple[int, ...]] = {}

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.by_dim)

    def coboundary(self, k: int) -> np.ndarray:
        """Matrix of d: C^k -> C^{k+1} (rows: (k+1)-cells, columns: k-cells)."""
        return self._d[k].copy()

    def check_d_squared(self) -> bool:
        return all(not np.any(self._d[k + 1] @ self._d[k]) for k in range(self.n - 1))

    def restricted(self, cells: Iterable[int], k: int) -> np.ndarray:
        """Coboundary d^k restricted to a set of cell indices."""
        cells = set(cells)
        rows = [self._pos[i] for i in self.by_dim[k + 1] if i in cells]
        cols = [self._pos[i] for i in self.by_dim[k] if i in cells]
        return self._d[k][np.ix_(rows, cols)]

    def cohomology(self, cells: Iterable[int]) -> tuple[int, ...]:
        """Rational cohomology ranks of the cochain complex on a set of cells.

        Works for any set that is closed upward or downward in the face
        order; the restricted coboundary is then a sub- or quotient complex.
        """
        key = frozenset(cells)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        counts = [sum(1 for i in self.by_dim[k] if i in key) for k in range(self.n + 1)]
        ranks = [0] * (self.n + 1)  # ranks[k] = rank of d^{k-1}
        for k in range(self.n):
            if counts[k] and counts[k + 1]:
                ranks[k + 1] = _rank(self.restricted(key, k))
        h = tuple(counts[k] - ranks[k] - (ranks[k + 1] if k < self.n else 0) for k in range(self.n + 1))
        self._cache[key] = h
        return h

    def mask_indices(self, mask: SubcomplexMask) -> frozenset:
        return frozenset(self.index[c] for c in mask.cones)


def _rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return rational_rank(M.tolist())


_P_CACHE: dict[Fan, CellComplexP] = {}


def build_P(F: Fan) -> CellComplexP:
    """Cell complex of a simplicial fan (cached per fan).

    Raises:
        NotSimplicial: if a maximal cone has dependent generators (already
            rejected when the Fan is constructed).
    """
    P = _P_CACHE.get(F)
    if P is None:
        if any(len(c) > F.n for c in F.max_cones):
            raise NotSimplicial("cone with more rays than the lattice rank")
        P = _P_CACHE[F] = CellComplexP(F)
    return P


def P_x_subcomplex(P: CellComplexP, gamma: Sequence[int], within: SubcomplexMask | None = None) -> SubcomplexMask:
    """Cells whose cone contains gamma (the open sets containing O(gamma))."""
    g = set(gamma)
    pool = within.cones if within is not None else P.cells
    return SubcomplexMask(frozenset(c for c in pool if g <= set(c)), within.shift if within else 0)


def fibre_subcomplex(phi: ToricMorphism, tau: Sequence[int], P: CellComplexP | None = None) -> SubcomplexMask:
    """Cells whose cone's barycenter maps into the relative interior of tau."""
    X = phi.source
    tau = tuple(sorted(tau))
    P = P or build_P(X)
    keep = []
    for c in P.cells:
        bary = tuple(sum(X.rays[i][k] for i in c) for k in range(X.n))
        if in_cone(phi.target, tau, phi.image(bary), relint=True):
            keep.append(c)
    return SubcomplexMask(frozenset(keep), phi.target.n - len(tau))


def subcomplex_cohomology(P: CellComplexP, mask: SubcomplexMask) -> tuple[int, ...]:
    """Cohomology ranks of the mask, indexed from the mask's shift."""
    h = P.cohomology(P.mask_indices(mask))
    return h[mask.shift :]


def is_point(h: Sequence[int]) -> bool:
    return len(h) > 0 and h[0] == 1 and not any(h[1:])


@dataclass
class CoverReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    checked: int = 0

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "checked": self.checked}


def verify_cover_axioms(P: CellComplexP, mask: SubcomplexMask | None = None) -> CoverReport:
    """Check the cover axioms for P, or for a subcomplex such as a fibre complex.

    incidence: cells meet only a cone and one of its facets, and d^2 = 0.
    cover: the lowest cells are the maximal cones of the region and every
        cell lies over one of them.
    star: for each cell gamma, the cells over gamma (cones containing
        gamma) have the cohomology of a point.
    """
    violations = []
    if mask is None:
        mask = SubcomplexMask(frozenset(P.cells), 0)
        tops = set(P.fan.max_cones)
        lows = {c for c in P.cells if P.n - len(c) == 0}
        if tops != lows:
            violations.append("cover: vertices of P are not the maximal cones of the fan")
    for (i, j), e in P.incidence.items():
        a, b = P.cells[i], P.cells[j]
        if not (set(b) < set(a) and len(b) == len(a) - 1 and e in (1, -1)):
            violations.append(f"incidence: bad incidence between {list(a)} and {list(b)}")
    if not P.check_d_squared():
        violations.append("incidence: coboundary does not square to zero")

    low = P.n - mask.shift
    vertices = [c for c in mask.cones if len(c) == low]
    for c in sorted(mask.cones):
        if len(c) > low:
            violations.append(f"cover: cell {list(c)} lies below the mask's vertex dimension")
        elif not any(set(c) <= set(v) for v in vertices):
            violations.append(f"cover: cell {list(c)} is covered by no vertex")

    checked = 0
    for g in sorted(mask.cones, key=lambda c: (len(c), c)):
        h = subcomplex_cohomology(P, P_x_subcomplex(P, g, within=mask))
        checked += 1
        if not is_point(h):
            label = "star not connected:" if not h or h[0] != 1 else "star not acyclic:"
            violations.append(f"{label} cells over {list(g)} have cohomology {list(h)}")
    return CoverReport(not violations, violations, checked)


def indicator_cells(P: CellComplexP, negmask: int) -> frozenset:
    """Cells whose cone avoids every ray in the bitmask."""
    return frozenset(i for i, c in enumerate(P.cells) if not any((negmask >> r) & 1 for r in c))


def cech_ranks_for_negset(P: CellComplexP, negmask: int) -> tuple[int, ...]:
    return P.cohomology(indicator_cells(P, negmask))


def graded_cech_cohomology(F: Fan, D: Sequence[int], m: Sequence[int], P: CellComplexP | None = None) -> tuple[int, ...]:
    """dim H^i(X, O(D))_m via the reduced Čech complex on P.

    Gamma(U_sigma, O(D))_m is one-dimensional exactly when
    ``<m, u_rho> + D_rho >= 0`` for every ray of sigma.
    """
    P = P or build_P(F)
    vals = [sum(a * b for a, b in zip(m, u)) + d for u, d in zip(F.rays, D)]
    neg = sum(1 << r for r, v in enumerate(vals) if v < 0)
    return cech_ranks_for_negset(P, neg)


def graded_cech_table(F: Fan, D: Sequence[int], points, P: CellComplexP | None = None) -> dict:
    """graded_cech_cohomology for many degrees at once."""
    P = P or build_P(F)
    pts = np.asarray(points, dtype=np.int64).reshape(-1, F.n)
    masks = _kernels.sign_masks(pts, np.array(F.rays, dtype=np.int64), np.array(D, dtype=np.int64))
    out = {}
    for p, msk in zip(pts, masks):
        out[tuple(int(x) for x in p)] = cech_ranks_for_negset(P, int(msk))
    return out
