"""Negative sets and a second cohomology engine for invariant divisors.

For a divisor D and character m let J be the set of rays with
``<m, u_rho> + D_rho < 0``. Then ``dim H^i(X, O(D))_m`` is the rank of the
reduced cohomology ``H~^{i-1}(Delta_J)``, where Delta_J is the simplicial
complex on J whose faces are the subsets lying in a common cone. This module
uses that criterion directly and never touches the cell complex P, so it is
an independent check on :mod:`toric_hdi.cells`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

from .fan import Fan, ToricMorphism, rays_into_cone
from .linalg import rational_rank
from .polyhedral import Constraint, HPolyhedron, NotPointed, decompose, lattice_points_of_polytope, tighten_strict

DEFAULT_RAY_CAP = 14


class TooManyRays(ValueError):
    """The exhaustive 2^s scan would exceed the configured cap."""


class UnboundedContribution(ValueError):
    """A sign-pattern polyhedron with nonzero cohomology is unbounded."""


NegSet = tuple[int, ...]


@dataclass(frozen=True)
class DeltaComplex:
    vertices: tuple[int, ...]
    faces: frozenset

    def faces_of_size(self, k: int) -> list[tuple[int, ...]]:
        return sorted(f for f in self.faces if len(f) == k)


def delta_J(F: Fan, J: Sequence[int]) -> DeltaComplex:
    """Subsets of J contained in a common cone of F."""
    J = tuple(sorted(J))
    faces = {()}
    for c in F.max_cones:
        inter = tuple(r for r in J if r in c)
        for k in range(1, len(inter) + 1):
            faces.update(itertools.combinations(inter, k))
    return DeltaComplex(J, frozenset(faces))


def reduced_cohomology_ranks(delta: DeltaComplex) -> tuple[int, ...]:
    """Ranks of H~^k for k = -1, 0, ..., dim (entry 0 of the result is k = -1).

    Uses the augmented cochain complex with the empty face in degree -1.
    """
    top = max(len(f) for f in delta.faces)
    by_size = [delta.faces_of_size(k) for k in range(top + 1)]
    index = [{f: i for i, f in enumerate(fs)} for fs in by_size]
    ranks = [0] * (top + 2)  # ranks[k] = rank of coboundary from size k-1 to size k
    for k in range(1, top + 1):
        rows = []
        for f in by_size[k]:
            row = [0] * len(by_size[k - 1])
            for p in range(len(f)):
                row[index[k - 1][f[:p] + f[p + 1 :]]] = -1 if p % 2 else 1
            rows.append(row)
        ranks[k] = rational_rank(rows) if rows and rows[0] else 0
    return tuple(len(by_size[k]) - ranks[k] - ranks[k + 1] for k in range(top + 1))


@functools.lru_cache(maxsize=None)
def _delta_table(F: Fan, cap: int) -> dict[int, tuple[int, ...]]:
    if F.s > cap:
        raise TooManyRays(f"fan has {F.s} rays; the negative-set scan is capped at {cap}")
    table = {}
    for bits in range(1 << F.s):
        J = tuple(r for r in range(F.s) if (bits >> r) & 1)
        table[bits] = reduced_cohomology_ranks(delta_J(F, J))
    return table


def reduced_rank(F: Fan, J: Sequence[int], i: int, cap: int = DEFAULT_RAY_CAP) -> int:
    """rank H~^{i-1}(Delta_J), i.e. dim H^i in any degree with negative set J."""
    ranks = _delta_table(F, cap)[_bits(J)]
    return ranks[i] if 0 <= i < len(ranks) else 0


def _bits(J) -> int:
    return sum(1 << r for r in J)


def neg_sets(F: Fan, i: int, cap: int = DEFAULT_RAY_CAP) -> list[NegSet]:
    """All J with nonzero H~^{i-1}(Delta_J), in increasing bitmask order.

    Raises:
        TooManyRays: if the fan has more than ``cap`` rays.
    """
    table = _delta_table(F, cap)
    out = []
    for bits, ranks in table.items():
        if 0 <= i < len(ranks) and ranks[i]:
            out.append(tuple(r for r in range(F.s) if (bits >> r) & 1))
    return sorted(out, key=lambda J: (len(J), J))


def restricted_neg_sets(phi: ToricMorphism, tau: Sequence[int], i: int, cap: int = DEFAULT_RAY_CAP) -> list[NegSet]:
    """Global negative sets whose rays all map into tau."""
    allowed = set(rays_into_cone(phi, tau))
    return [J for J in neg_sets(phi.source, i, cap) if set(J) <= allowed]


def pattern_polyhedron(F: Fan, D: Sequence[int], J: Sequence[int], rays: Sequence[int] | None = None) -> HPolyhedron:
    """Characters m whose negative set, among ``rays``, is exactly J.

    Strict inequalities are tightened, so the result is exact on lattice
    points.
    """
    rays = range(F.s) if rays is None else rays
    Jset = set(J)
    cons = []
    for r in rays:
        u = F.rays[r]
        if r in Jset:
            # <m,u> + D_r < 0  <=>  <-u, m> > D_r
            cons.append(Constraint(tuple(-x for x in u), D[r], True))
        else:
            cons.append(Constraint(u, -D[r]))
    return tighten_strict(HPolyhedron(F.n, tuple(cons)))


@dataclass
class CohomologyTable:
    """Per-degree cohomology ranks and totals for one divisor."""

    h: list[int]
    degrees: dict[tuple[int, ...], tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "h": list(self.h),
            "degrees": {",".join(map(str, m)): list(r) for m, r in sorted(self.degrees.items())},
        }


def h_i(F: Fan, D: Sequence[int], cap: int = DEFAULT_RAY_CAP) -> CohomologyTable:
    """All cohomology of O(D) on a complete fan, degree by degree.

    Raises:
        UnboundedContribution: if a pattern with nonzero cohomology has
            infinitely many lattice points (the fan is not complete).
    """
    D = tuple(int(x) for x in D)
    if len(D) != F.s:
        raise ValueError(f"divisor has length {len(D)}, expected {F.s}")
    table = _delta_table(F, cap)
    totals = [0] * (F.n + 1)
    degrees: dict[tuple[int, ...], list[int]] = {}
    for bits, ranks in table.items():
        if not any(ranks[: F.n + 1]):
            continue
        J = tuple(r for r in range(F.s) if (bits >> r) & 1)
        P = pattern_polyhedron(F, D, J)
        try:
            dec = decompose(P)
        except NotPointed as e:
            raise UnboundedContribution(f"pattern {list(J)}: {e}") from e
        if dec.is_empty:
            continue
        pts = lattice_points_of_polytope(dec.vertices)
        if dec.recession_rays and pts:
            raise UnboundedContribution(f"pattern {list(J)} has an unbounded set of characters")
        for m in pts:
            row = degrees.setdefault(m, [0] * (F.n + 1))
            for i in range(min(len(ranks), F.n + 1)):
                row[i] += ranks[i]
                totals[i] += ranks[i]
    return CohomologyTable(totals, {m: tuple(r) for m, r in degrees.items()})
