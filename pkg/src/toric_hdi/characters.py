"""Characters of the kernel torus and the divisor pairs (D_mu, E_mu).

For a toric fibration phi: X -> Y the kernel torus T_K has character
lattice M_K = coker(L^T). The higher direct image R^i phi_* O(D) splits into
eigensheaves indexed by characters mu of T_K, and only finitely many of them
(the set C(L, i)) are nonzero. For each such mu this module produces a pair
of invariant divisors (D_mu on X, E_mu >= 0 on Y) from which the ideal Čech
complex of :mod:`toric_hdi.complex` is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fan import Cone, ToricMorphism, div_char, pullback_divisor, rays_into_cone, validate_morphism
from .linalg import IntMatrix, cokernel_projection, solve_integer
from .negsets import pattern_polyhedron, restricted_neg_sets
from .polyhedral import decompose, lattice_points_of_polytope


class NotAFibration(ValueError):
    """The morphism fails the fibration check."""


@dataclass(frozen=True)
class KernelCharacters:
    """Projection ``M_X -> M_K`` and a section ``M_K -> M_X``."""

    projection: IntMatrix
    section: IntMatrix

    @property
    def rank(self) -> int:
        return self.projection.rows

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.projection @ v

    def lift(self, mu: Sequence[int]) -> tuple[int, ...]:
        return self.section @ mu


def kernel_characters(phi: ToricMorphism) -> KernelCharacters:
    """Cokernel of the transposed lattice map.

    Raises:
        TorsionCokernel: if the lattice map is not surjective onto a
            saturated sublattice (not a fibration).
    """
    proj, section = cokernel_projection(phi.matrix.T())
    return KernelCharacters(proj, section)


def require_fibration(phi: ToricMorphism) -> None:
    rep = validate_morphism(phi)
    if not rep.fibration:
        raise NotAFibration("; ".join(rep.problems) or "morphism is not a fibration")


@dataclass(frozen=True)
class GammaSet:
    """Lattice points of M_X collected for one maximal target cone."""

    cone: Cone
    points: tuple[tuple[int, ...], ...]
    by_pattern: dict = field(default_factory=dict, compare=False, hash=False)


def gamma_sigma(phi: ToricMorphism, D: Sequence[int], i: int, sigma: Sequence[int]) -> GammaSet:
    """Union over J in Neg^i_sigma of bounded-part lattice points.

    Each pattern polyhedron constrains only the rays mapping into sigma:
    ``<m, u> + D < 0`` on J and ``>= 0`` on the other such rays.
    """
    X = phi.source
    sigma = tuple(sorted(sigma))
    rays = rays_into_cone(phi, sigma)
    pts = set()
    by_pattern = {}
    for J in restricted_neg_sets(phi, sigma, i):
        dec = decompose(pattern_polyhedron(X, D, J, rays))
        found = lattice_points_of_polytope(dec.vertices)
        by_pattern[J] = tuple(found)
        pts.update(found)
    return GammaSet(sigma, tuple(sorted(pts)), by_pattern)


@dataclass(frozen=True)
class CharacterSet:
    """C(L, i) with, per maximal target cone, its Gamma set and C_sigma."""

    characters: tuple[tuple[int, ...], ...]
    gammas: dict
    per_cone: dict

    def cones_for(self, mu) -> list[Cone]:
        return [s for s, cs in self.per_cone.items() if mu in cs]


def character_set(phi: ToricMorphism, D: Sequence[int], i: int, kc: KernelCharacters | None = None) -> CharacterSet:
    kc = kc or kernel_characters(phi)
    gammas = {}
    per_cone = {}
    for sigma in phi.target.max_cones:
        g = gamma_sigma(phi, D, i, sigma)
        gammas[sigma] = g
        per_cone[sigma] = tuple(sorted({kc.project(v) for v in g.points}))
    chars = sorted({mu for cs in per_cone.values() for mu in cs})
    return CharacterSet(tuple(chars), gammas, per_cone)


def chart_matrix(phi: ToricMorphism, sigma: Sequence[int]) -> IntMatrix:
    """c_sigma: chart exponents (indexed by sigma's rays) -> M_Y.

    The columns form the basis dual to sigma's generators, i.e. the inverse
    of the generator matrix.
    """
    Y = phi.target
    G = IntMatrix.from_rows([Y.rays[r] for r in sorted(sigma)], cols=Y.n)
    cols = []
    for k in range(Y.n):
        e = [int(k == j) for j in range(Y.n)]
        w = solve_integer(G, e)
        if w is None:
            raise ValueError(f"target cone {list(sigma)} is not smooth")
        cols.append(w)
    return IntMatrix.from_rows(list(zip(*cols)), cols=Y.n)


def local_divisor(
    phi: ToricMorphism,
    D: Sequence[int],
    i: int,
    sigma: Sequence[int],
    mu: Sequence[int],
    kc: KernelCharacters | None = None,
    gamma: GammaSet | None = None,
) -> tuple[int, ...]:
    """D_{sigma,mu}: principal divisor on Y attached to the smallest f.

    The f-set is ``{f : phi_sigma f = v - section(mu), v in Gamma_sigma,
    proj(v) = mu}`` together with 0, with ``phi_sigma = L^T c_sigma``.
    """
    f_min, _ = _f_data(phi, D, i, sigma, mu, kc, gamma)
    return div_char(phi.target, chart_matrix(phi, sigma) @ f_min)


def _f_data(phi, D, i, sigma, mu, kc=None, gamma=None):
    kc = kc or kernel_characters(phi)
    gamma = gamma or gamma_sigma(phi, D, i, sigma)
    mu = tuple(mu)
    c = chart_matrix(phi, sigma)
    phi_sigma = phi.matrix.T() @ c
    base = kc.lift(mu)
    fs = [tuple([0] * phi.target.n)]
    for v in gamma.points:
        if kc.project(v) != mu:
            continue
        f = solve_integer(phi_sigma, [a - b for a, b in zip(v, base)])
        if f is None:
            raise AssertionError(f"no chart exponent for {v}; projection and section disagree")
        fs.append(tuple(f))
    f_min = tuple(min(col) for col in zip(*fs))
    return f_min, fs


@dataclass(frozen=True)
class DivisorPair:
    """Divisors for one character: D_mu on the source, effective E_mu on the target."""

    mu: tuple[int, ...]
    D_mu: tuple[int, ...]
    E_mu: tuple[int, ...]
    tau: Cone = ()
    local: dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> dict:
        return {"mu": list(self.mu), "D": list(self.D_mu), "E": list(self.E_mu)}


def divisor_pairs(
    phi: ToricMorphism,
    D: Sequence[int],
    i: int,
    kc: KernelCharacters | None = None,
    chars: CharacterSet | None = None,
) -> list[DivisorPair]:
    """One (D_mu, E_mu) pair per character in C(L, i).

    tau is the lowest-index maximal target cone with mu in C_tau, and
    ``-E_mu`` is the componentwise minimum of ``D_{sigma,mu} - D_{tau,mu}``
    over the other eligible cones, together with 0.
    """
    D = tuple(int(x) for x in D)
    if len(D) != phi.source.s:
        raise ValueError(f"divisor has length {len(D)}, expected {phi.source.s}")
    kc = kc or kernel_characters(phi)
    chars = chars or character_set(phi, D, i, kc)
    Y = phi.target
    out = []
    for mu in chars.characters:
        cones = chars.cones_for(mu)
        local = {s: local_divisor(phi, D, i, s, mu, kc, chars.gammas[s]) for s in cones}
        tau = cones[0]
        neg_E = [0] * Y.s
        for s in cones[1:]:
            diff = [a - b for a, b in zip(local[s], local[tau])]
            neg_E = [min(a, b) for a, b in zip(neg_E, diff)]
        E = tuple(-x for x in neg_E)
        assert all(x >= 0 for x in E)
        shift = pullback_divisor(phi, [a - b for a, b in zip(local[tau], E)])
        base = div_char(phi.source, kc.lift(mu))
        D_mu = tuple(a + b + c for a, b, c in zip(base, D, shift))
        out.append(DivisorPair(tuple(mu), D_mu, E, tau, local))
    return out
