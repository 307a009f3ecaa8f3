"""The ideal Čech complex attached to each divisor pair and the module it presents.

For a pair (D_mu, E_mu) each cell sigma of P (a cone of the source fan)
carries the monomial ideal of the target Cox ring

    I_{mu,sigma} = < y^f : (phi^* f + D_mu)_j >= 0 for all rays j of sigma >.

Membership of a single monomial is an inequality test, so the complex is
evaluated one fine degree f at a time: the cells whose ideal contains y^f
form an indicator cochain complex on P, exactly as in the graded Čech
computation for the divisor ``D_mu + phi^* f``. The module
``H^i(complex) (x) O(E_mu)`` presents the mu-part of R^i phi_* O(D).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .cells import CellComplexP, build_P, cech_ranks_for_negset, indicator_cells
from .characters import DivisorPair, divisor_pairs, require_fibration
from .fan import Fan, ToricMorphism, class_group, div_char, pullback_matrix
from .linalg import integer_kernel, rational_rank
from .polyhedral import Constraint, HPolyhedron, integer_points, minimal_integer_solutions


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by its minimal generators.

    The zero ideal has no generators; the unit ideal is generated by the
    zero exponent vector.
    """

    nvars: int
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        gens = sorted({tuple(int(x) for x in g) for g in self.generators})
        for g in gens:
            if len(g) != self.nvars or any(x < 0 for x in g):
                raise ValueError(f"bad exponent vector {g}")
        anti = [g for g in gens if not any(h != g and _leq(h, g) for h in gens)]
        object.__setattr__(self, "generators", tuple(anti))

    @classmethod
    def zero(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars, ())

    @classmethod
    def unit(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars, ((0,) * nvars,))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.nvars,)

    def contains(self, f: Sequence[int]) -> bool:
        return any(_leq(g, f) for g in self.generators)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def intersection(self, other: "MonomialIdeal") -> "MonomialIdeal":
        lcms = [tuple(max(a, b) for a, b in zip(g, h)) for g in self.generators for h in other.generators]
        return MonomialIdeal(self.nvars, tuple(lcms))

    def label(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero:
            return "0"
        if self.is_unit:
            return "S"
        names = names or [f"y{k}" for k in range(self.nvars)]
        mons = []
        for g in self.generators:
            parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, g) if e]
            mons.append("*".join(parts))
        return "(" + ", ".join(mons) + ")"


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def ideal_for_cell(phi: ToricMorphism, pair: DivisorPair, sigma: Sequence[int]) -> MonomialIdeal:
    """Minimal generators of I_{mu,sigma}."""
    r = phi.target.s
    Pb = pullback_matrix(phi)
    cons = [Constraint(Pb.data[j], -pair.D_mu[j]) for j in sorted(sigma)]
    gens = minimal_integer_solutions(HPolyhedron(r, tuple(cons)))
    return MonomialIdeal(r, tuple(gens))


@dataclass
class IdealCechComplex:
    """Ideal Čech complexes, one per character mu, on the source cell complex."""

    phi: ToricMorphism
    P: CellComplexP
    i: int
    pairs: list[DivisorPair]
    ideals: dict = field(default_factory=dict)

    @property
    def characters(self) -> list[tuple[int, ...]]:
        return [p.mu for p in self.pairs]

    def pair(self, mu) -> DivisorPair:
        mu = tuple(mu)
        for p in self.pairs:
            if p.mu == mu:
                return p
        raise KeyError(f"character {list(mu)} is not in C(L,{self.i})")

    def twist_class(self, mu) -> tuple[int, ...]:
        return class_group(self.phi.target).degree(self.pair(mu).E_mu)

    def negmask(self, mu, f: Sequence[int]) -> int:
        """Bitmask of source rays where y^f fails the cell inequality."""
        vals = np.asarray(pullback_matrix(self.phi).data, dtype=object) @ np.asarray(f, dtype=object)
        D = self.pair(mu).D_mu
        return sum(1 << j for j, (v, d) in enumerate(zip(vals, D)) if v + d < 0)

    def present_cells(self, mu, f: Sequence[int]) -> frozenset:
        return indicator_cells(self.P, self.negmask(mu, f))


def build_complex(phi: ToricMorphism, D: Sequence[int], i: int, pairs: list[DivisorPair] | None = None) -> IdealCechComplex:
    """Monomial ideals on every cell for every mu in C(L, i).

    Raises:
        NotAFibration: if the morphism fails the fibration check.
    """
    require_fibration(phi)
    pairs = pairs if pairs is not None else divisor_pairs(phi, D, i)
    P = build_P(phi.source)
    C = IdealCechComplex(phi, P, i, list(pairs))
    for p in C.pairs:
        C.ideals[p.mu] = tuple(ideal_for_cell(phi, p, c) for c in P.cells)
    return C


def fine_cohomology(C: IdealCechComplex, mu, f: Sequence[int]) -> tuple[int, ...]:
    """Cohomology ranks of the complex in the fine degree f."""
    if any(x < 0 for x in f):
        raise ValueError("fine degree must be non-negative")
    return cech_ranks_for_negset(C.P, C.negmask(mu, f))


def monomials_of_class(Y: Fan, d: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent vectors f >= 0 of the Cox ring of Y with class d."""
    cg = class_group(Y)
    D0 = cg.representative(d)
    # f = D0 + div_char(m) >= 0
    poly = HPolyhedron(Y.n, tuple(Constraint(u, -a) for u, a in zip(Y.rays, D0)))
    out = [tuple(a + b for a, b in zip(D0, div_char(Y, m))) for m in integer_points(poly)]
    return sorted(out)


@dataclass
class HilbertValue:
    degree: tuple[int, ...]
    per_mu: dict
    total: int

    def to_dict(self) -> dict:
        return {
            "degree": list(self.degree),
            "per_mu": {",".join(map(str, k)): v for k, v in self.per_mu.items()},
            "total": self.total,
        }


def hilbert_function(C: IdealCechComplex, i: int, d: Sequence[int]) -> HilbertValue:
    """Dimension of the class-d piece of the twisted module, per mu and in total.

    The mu-component is ``H^i(complex) (x) O(E_mu)``, so its class-d piece is
    read off from the fine degrees of class ``d + [E_mu]``.
    """
    Y = C.phi.target
    Pb = np.asarray(pullback_matrix(C.phi).data, dtype=np.int64).reshape(C.phi.source.s, Y.s)
    per_mu = {}
    for p in C.pairs:
        cls = tuple(a + b for a, b in zip(d, C.twist_class(p.mu)))
        fs = monomials_of_class(Y, cls)
        if not fs:
            per_mu[p.mu] = 0
            continue
        masks = _kernels.sign_masks(np.asarray(fs, dtype=np.int64), Pb, np.asarray(p.D_mu, dtype=np.int64))
        per_mu[p.mu] = int(sum(_rank_at(C.P, int(mk), i) for mk in masks))
    return HilbertValue(tuple(d), per_mu, sum(per_mu.values()))


def _rank_at(P: CellComplexP, negmask: int, i: int) -> int:
    h = cech_ranks_for_negset(P, negmask)
    return h[i] if 0 <= i < len(h) else 0


def _cocycles(P: CellComplexP, cells: frozenset, i: int, ambient: list[int]) -> list[list[int]]:
    """Basis of Z^i on a cell set, written in the coordinates of ``ambient``."""
    own = [c for c in P.by_dim[i] if c in cells]
    if not own:
        return []
    if i < P.n:
        d = P.restricted(cells, i)
    else:
        d = np.zeros((0, len(own)), dtype=np.int64)
    K = integer_kernel([list(map(int, r)) for r in d] if d.shape[0] else [[0] * len(own)])
    pos = {c: k for k, c in enumerate(ambient)}
    out = []
    for j in range(K.cols):
        v = [0] * len(ambient)
        for c, x in zip(own, K.column(j)):
            v[pos[c]] = x
        out.append(v)
    return out


def _coboundaries(P: CellComplexP, cells: frozenset, i: int) -> list[list[int]]:
    if i == 0:
        return []
    d = P.restricted(cells, i - 1)
    if d.size == 0:
        return []
    return [list(map(int, col)) for col in d.T]


@dataclass
class GeneratorReport:
    mu: tuple[int, ...]
    degrees: list[tuple[tuple[int, ...], int]]


def minimal_generators(C: IdealCechComplex, i: int, box: int | Sequence[int]) -> dict:
    """Fine degrees f <= box where new module generators appear.

    At f the number of new generators is
    ``dim H^i_f - dim(sum over k of the images of H^i_{f - e_k})``. The maps
    come from inclusions of indicator cell sets, so images are spans of
    cocycles extended by zero, taken modulo coboundaries at f.

    Returns:
        dict mapping mu to a list of (f, count) with count > 0.
    """
    r = C.phi.target.s
    hi = [box] * r if isinstance(box, int) else list(box)
    if len(hi) != r or any(b < 0 for b in hi):
        raise ValueError("box must be non-negative with one bound per target ray")
    out = {}
    for p in C.pairs:
        found = []
        for f in itertools.product(*(range(b + 1) for b in hi)):
            n = _new_generators(C, p.mu, f, i)
            if n:
                found.append((f, n))
        out[p.mu] = found
    return out


def _new_generators(C: IdealCechComplex, mu, f, i) -> int:
    P = C.P
    A = C.present_cells(mu, f)
    h = P.cohomology(A)
    if not (0 <= i < len(h)) or h[i] == 0:
        return 0
    ambient = [c for c in P.by_dim[i] if c in A]
    vecs = _coboundaries(P, A, i)
    rank_B = rational_rank(vecs) if vecs else 0
    for k in range(len(f)):
        if f[k] == 0:
            continue
        g = list(f)
        g[k] -= 1
        A_prev = C.present_cells(mu, g)
        if P.cohomology(A_prev)[i] == 0:
            continue
        vecs = vecs + _cocycles(P, A_prev, i, ambient)
    rank_all = rational_rank(vecs) if vecs else 0
    return h[i] - (rank_all - rank_B)


def module_report(C: IdealCechComplex, degree_grid, gen_box) -> dict:
    """Hilbert values on a grid and box-bounded generator degrees, as JSON data."""
    hv = [hilbert_function(C, C.i, d).to_dict() for d in degree_grid]
    gens = minimal_generators(C, C.i, gen_box) if gen_box is not None else {}
    comps = []
    for p in C.pairs:
        comps.append(
            {
                "mu": list(p.mu),
                "D": list(p.D_mu),
                "E": list(p.E_mu),
                "twist_class": list(C.twist_class(p.mu)),
                "generators": [{"f": list(f), "count": n} for f, n in gens.get(p.mu, [])],
            }
        )
    return {
        "i": C.i,
        "C": [list(mu) for mu in C.characters],
        "components": comps,
        "hilbert": hv,
        "gen_box": gen_box,
    }


def ideal_table(C: IdealCechComplex, mu) -> dict:
    """Per cell dimension, the multiset of ideals (as labels) for one mu."""
    table = {}
    for c, ideal in zip(C.P.cells, C.ideals[tuple(mu)]):
        k = C.P.n - len(c)
        table.setdefault(k, {})
        lab = ideal.label()
        table[k][lab] = table[k].get(lab, 0) + 1
    return table
