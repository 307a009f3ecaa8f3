"""Fans, torus-invariant divisors, class groups and toric morphisms.

Only simplicial fans are supported; cones are sorted tuples of ray indices.
Ray order is whatever the caller supplied and is never changed, so divisor
vectors are always indexed by the caller's ray numbering.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (
    IntMatrix,
    cokernel_projection,
    primitive,
    rational_rank,
    smith_normal_form,
)

Cone = tuple[int, ...]


class InvalidFan(ValueError):
    """Malformed fan data (non-primitive ray, bad index, overlapping cones...)."""


class InvalidCone(ValueError):
    """A cone argument is not a cone of the fan."""


class NotSimplicial(InvalidFan):
    """A maximal cone has linearly dependent generators."""


class InvalidMorphism(ValueError):
    """Malformed morphism data."""


@dataclass(frozen=True)
class Fan:
    """A simplicial fan in ``Z^n``.

    Attributes:
        n: Lattice rank.
        rays: Primitive ray generators.
        max_cones: Maximal cones as sorted tuples of ray indices, in the
            caller's order.
    """

    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        for k, r in enumerate(rays):
            if len(r) != self.n:
                raise InvalidFan(f"ray {k} {list(r)} does not have length n={self.n}")
            if not any(r):
                raise InvalidFan(f"ray {k} is zero")
            if math.gcd(*r) != 1:
                raise InvalidFan(f"ray {k} {list(r)} is not primitive (gcd {math.gcd(*r)})")
        if len(set(rays)) != len(rays):
            raise InvalidFan("duplicate rays")
        used = set()
        for c in cones:
            if len(set(c)) != len(c):
                raise InvalidFan(f"cone {list(c)} repeats a ray")
            for i in c:
                if not 0 <= i < len(rays):
                    raise InvalidFan(f"cone {list(c)} refers to missing ray {i}")
            if c and rational_rank([rays[i] for i in c]) < len(c):
                raise NotSimplicial(f"cone {list(c)} is not simplicial")
            used.update(c)
        if used != set(range(len(rays))):
            missing = sorted(set(range(len(rays))) - used)
            raise InvalidFan(f"rays {missing} lie in no maximal cone")
        if len(set(cones)) != len(cones):
            raise InvalidFan("duplicate maximal cones")
        for a, b in itertools.permutations(cones, 2):
            if set(a) <= set(b):
                raise InvalidFan(f"cone {list(a)} is a face of {list(b)}, not maximal")

    @property
    def s(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        """s x n matrix whose rows are the ray generators."""
        return IntMatrix(self.s, self.n, self.rays)

    def to_dict(self) -> dict:
        return {"n": self.n, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_dict(cls, d: dict) -> "Fan":
        try:
            return cls(int(d["n"]), tuple(map(tuple, d["rays"])), tuple(map(tuple, d["max_cones"])))
        except (KeyError, TypeError) as e:
            raise InvalidFan(f"malformed fan object: {e}") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "Fan":
        return cls.from_dict(json.loads(s))


@functools.lru_cache(maxsize=None)
def all_cones(F: Fan) -> tuple[Cone, ...]:
    """Every face of every maximal cone, including the zero cone.

    Ordered by dimension, then lexicographically.
    """
    faces = set()
    for c in F.max_cones:
        for k in range(len(c) + 1):
            faces.update(itertools.combinations(c, k))
    return tuple(sorted(faces, key=lambda c: (len(c), c)))


def is_cone(F: Fan, cone: Sequence[int]) -> bool:
    c = set(cone)
    return any(c <= set(m) for m in F.max_cones)


def is_smooth(F: Fan) -> bool:
    """Every maximal cone's generators extend to a basis of ``Z^n``."""
    for c in F.max_cones:
        if not c:
            continue
        snf = smith_normal_form([F.rays[i] for i in c])
        if any(d != 1 for d in snf.diagonal):
            return False
    return True


def _walls(F: Fan) -> dict[Cone, list[int]]:
    walls: dict[Cone, list[int]] = {}
    for k, c in enumerate(F.max_cones):
        for w in itertools.combinations(c, len(c) - 1):
            walls.setdefault(w, []).append(k)
    return walls


def is_complete(F: Fan) -> bool:
    """Pure of dimension n, each wall in exactly two maximal cones, connected."""
    if not F.max_cones or any(len(c) != F.n for c in F.max_cones):
        return False
    if F.n == 0:
        return True
    walls = _walls(F)
    if any(len(v) != 2 for v in walls.values()):
        return False
    adj = {k: set() for k in range(len(F.max_cones))}
    for a, b in walls.values():
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(F.max_cones)


def check_fan(F: Fan) -> list[str]:
    """Problems with the fan beyond the structural checks done on construction.

    Currently: pairs of maximal cones whose intersection is not a common
    face. Detected with a small linear program per pair (integer data, so
    the tolerance is safe at desk scale).
    """
    from scipy.optimize import linprog

    problems = []
    for (i, A), (j, B) in itertools.combinations(enumerate(F.max_cones), 2):
        common = set(A) & set(B)
        gens = [F.rays[r] for r in A] + [tuple(-x for x in F.rays[r]) for r in B]
        nv = len(gens)
        A_eq = [[g[k] for g in gens] for k in range(F.n)] + [[1.0] * nv]
        b_eq = [0.0] * F.n + [1.0]
        c = [-(1.0 if r not in common else 0.0) for r in A] + [-(1.0 if r not in common else 0.0) for r in B]
        res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * nv, method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            problems.append(f"maximal cones {list(A)} and {list(B)} overlap beyond a common face")
    return problems


def div_char(F: Fan, m: Sequence[int]) -> tuple[int, ...]:
    """Principal divisor of the character m: coefficient ``<m, u_rho>``."""
    if len(m) != F.n:
        raise ValueError(f"character {list(m)} does not have length {F.n}")
    return tuple(sum(a * b for a, b in zip(m, u)) for u in F.rays)


@dataclass(frozen=True)
class ClassGroup:
    """Class group ``Z^s / div_char(M)`` with a chosen integral basis.

    ``degree_map`` sends divisors to classes, ``section`` sends a class to a
    divisor representing it.
    """

    rank: int
    degree_map: IntMatrix
    section: IntMatrix

    def degree(self, D: Sequence[int]) -> tuple[int, ...]:
        return self.degree_map @ D

    def representative(self, d: Sequence[int]) -> tuple[int, ...]:
        return self.section @ d


@functools.lru_cache(maxsize=None)
def class_group(F: Fan) -> ClassGroup:
    proj, section = cokernel_projection(F.ray_matrix())
    return ClassGroup(proj.rows, proj, section)


def degree(F: Fan, D: Sequence[int]) -> tuple[int, ...]:
    return class_group(F).degree(D)


def cone_coordinates(gens: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Coefficients c with ``sum c_k gens[k] == v``, or None if v is not in the span.

    Generators must be linearly independent.
    """
    k = len(gens)
    n = len(v)
    M = [[Fraction(gens[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    row, pivots = 0, []
    for col in range(k):
        piv = next((i for i in range(row, n) if M[i][col] != 0), None)
        if piv is None:
            raise ValueError("generators are linearly dependent")
        M[row], M[piv] = M[piv], M[row]
        p = M[row][col]
        M[row] = [x / p for x in M[row]]
        for i in range(n):
            if i != row and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[row])]
        pivots.append(col)
        row += 1
    if any(M[i][k] != 0 for i in range(row, n)):
        return None
    return tuple(M[i][k] for i in range(k))


def in_cone(F: Fan, cone: Sequence[int], v: Sequence[int], relint: bool = False) -> bool:
    """Whether v lies in the support (or relative interior) of the cone."""
    if not cone:
        return not any(v)
    c = cone_coordinates([F.rays[i] for i in cone], v)
    if c is None:
        return False
    return all(x > 0 for x in c) if relint else all(x >= 0 for x in c)


def smallest_cone_containing(F: Fan, v: Sequence[int]) -> Cone | None:
    """The cone whose relative interior contains v (None if outside the support)."""
    for mc in F.max_cones:
        c = cone_coordinates([F.rays[i] for i in mc], v)
        if c is not None and all(x >= 0 for x in c):
            return tuple(r for r, x in zip(mc, c) if x > 0)
    return None


@dataclass(frozen=True)
class ToricMorphism:
    """Toric morphism given by a lattice map ``N_source -> N_target``.

    ``matrix`` has ``target.n`` rows and ``source.n`` columns.
    """

    source: Fan
    target: Fan
    matrix: IntMatrix

    def __post_init__(self):
        M = self.matrix if isinstance(self.matrix, IntMatrix) else IntMatrix.from_rows(self.matrix, cols=self.source.n)
        if M.shape != (self.target.n, self.source.n):
            raise InvalidMorphism(
                f"lattice map has shape {M.rows}x{M.cols}, expected {self.target.n}x{self.source.n}"
            )
        object.__setattr__(self, "matrix", M)

    def image(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.matrix @ v

    def ray_images(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.image(u) for u in self.source.rays)

    def to_dict(self) -> dict:
        return {"source": self.source.to_dict(), "target": self.target.to_dict(), "matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "ToricMorphism":
        try:
            src = Fan.from_dict(d["source"])
            tgt = Fan.from_dict(d["target"])
            return cls(src, tgt, IntMatrix.from_rows(d["matrix"], cols=src.n))
        except (KeyError, TypeError) as e:
            raise InvalidMorphism(f"malformed morphism object: {e}") from e

    @classmethod
    def identity(cls, F: Fan) -> "ToricMorphism":
        return cls(F, F, IntMatrix.identity(F.n))


@dataclass(frozen=True)
class MorphismReport:
    maps_cones: bool
    proper: bool
    fibration: bool
    problems: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "maps_cones": self.maps_cones,
            "proper": self.proper,
            "fibration": self.fibration,
            "problems": list(self.problems),
        }


def target_cone_of(phi: ToricMorphism, cone: Sequence[int]) -> Cone | None:
    """Smallest target cone containing the image of a source cone."""
    imgs = [phi.image(phi.source.rays[i]) for i in cone]
    bary = tuple(sum(col) for col in zip(*imgs)) if imgs else (0,) * phi.target.n
    tau = smallest_cone_containing(phi.target, bary)
    if tau is None:
        return None
    return tau if all(in_cone(phi.target, tau, w) for w in imgs) else None


def _is_surjective(M: IntMatrix) -> bool:
    if M.rows == 0:
        return True
    snf = smith_normal_form(M)
    return snf.rank == M.rows and all(d == 1 for d in snf.diagonal)


def _covers_preimage(phi: ToricMorphism, tau: Cone) -> bool:
    # Source cones inside L^{-1}(tau) must form a pseudomanifold whose free
    # walls all sit over the boundary of tau.
    X = phi.source
    inside = [c for c in all_cones(X) if all(in_cone(phi.target, tau, phi.image(X.rays[i])) for i in c)]
    if not inside:
        return False
    top = max(len(c) for c in inside)
    top_cones = [c for c in inside if len(c) == top]
    if any(not any(set(c) <= set(t) for t in top_cones) for c in inside):
        return False
    count: dict[Cone, int] = {}
    for t in top_cones:
        for w in itertools.combinations(t, top - 1):
            count[w] = count.get(w, 0) + 1
    gens = [phi.target.rays[i] for i in tau]
    for w, k in count.items():
        if k == 2:
            continue
        if k > 2:
            return False
        coords = [cone_coordinates(gens, phi.image(X.rays[i])) for i in w]
        on_boundary = any(all(c[j] == 0 for c in coords) for j in range(len(tau)))
        if not on_boundary:
            return False
    return True


def validate_morphism(phi: ToricMorphism) -> MorphismReport:
    """Check cone compatibility, properness and the fibration property.

    Properness is exact when the target is complete (then it is equivalent
    to completeness of the source). Otherwise each preimage of a maximal
    target cone is checked to be covered by source cones via a wall count.
    """
    problems = []
    maps_cones = True
    for c in phi.source.max_cones:
        if target_cone_of(phi, c) is None:
            maps_cones = False
            problems.append(f"image of source cone {list(c)} lies in no target cone")
    if not maps_cones:
        proper = False
    elif is_complete(phi.target):
        proper = is_complete(phi.source)
    else:
        proper = all(_covers_preimage(phi, t) for t in phi.target.max_cones)
    if maps_cones and not proper:
        problems.append("preimage of the target support is not covered by the source fan")
    surjective = _is_surjective(phi.matrix)
    if not surjective:
        problems.append("lattice map is not surjective onto N_target")
    return MorphismReport(maps_cones, proper, proper and surjective, tuple(problems))


def rays_into_cone(phi: ToricMorphism, tau: Sequence[int]) -> tuple[int, ...]:
    """Source rays whose image lies in the support of tau."""
    return tuple(j for j, w in enumerate(phi.ray_images()) if in_cone(phi.target, tau, w))


@functools.lru_cache(maxsize=None)
def _pullback_matrix(phi: ToricMorphism) -> tuple[tuple[int, ...], ...]:
    # Row rho: coefficients c_l with L u_rho = sum_l c_l u_l, taken in every
    # target maximal cone containing L u_rho; all choices must agree on
    # Cartier divisors, which holds when the rows agree as functionals. We
    # keep the lowest-index cone and check agreement in pullback_divisor.
    Y = phi.target
    rows = []
    for j, w in enumerate(phi.ray_images()):
        row = None
        for mc in Y.max_cones:
            c = cone_coordinates([Y.rays[i] for i in mc], w)
            if c is not None and all(x >= 0 for x in c):
                if any(x.denominator != 1 for x in c):
                    raise ValueError(f"target cone {list(mc)} is not smooth")
                row = [0] * Y.s
                for i, x in zip(mc, c):
                    row[i] = int(x)
                break
        if row is None:
            raise InvalidMorphism(f"image of source ray {j} lies outside the target fan")
        rows.append(tuple(row))
    return tuple(rows)


def _all_pullback_rows(phi: ToricMorphism, j: int) -> list[list[int]]:
    Y = phi.target
    w = phi.image(phi.source.rays[j])
    out = []
    for mc in Y.max_cones:
        c = cone_coordinates([Y.rays[i] for i in mc], w)
        if c is not None and all(x >= 0 for x in c):
            row = [0] * Y.s
            for i, x in zip(mc, c):
                row[i] = int(x)
            out.append(row)
    return out


def pullback_matrix(phi: ToricMorphism) -> IntMatrix:
    """s_source x s_target matrix of the divisor pullback (entries >= 0)."""
    return IntMatrix(phi.source.s, phi.target.s, _pullback_matrix(phi))


def pullback_divisor(phi: ToricMorphism, E: Sequence[int], check: bool = True) -> tuple[int, ...]:
    """Pull back a Cartier divisor on the target to the source.

    For a source ray with image ``v = sum_l c_l u_l`` in a target cone, the
    coefficient is ``sum_l c_l E_l`` (this is ``-<m_sigma, v>`` for the
    Cartier data ``m_sigma`` of E on that cone). With ``check`` set, every
    containing cone is tried and the answers must agree.
    """
    E = tuple(int(x) for x in E)
    if len(E) != phi.target.s:
        raise ValueError(f"divisor has length {len(E)}, expected {phi.target.s}")
    rows = _pullback_matrix(phi)
    out = tuple(sum(a * b for a, b in zip(r, E)) for r in rows)
    if check:
        for j in range(phi.source.s):
            vals = {sum(a * b for a, b in zip(r, E)) for r in _all_pullback_rows(phi, j)}
            assert len(vals) == 1, f"pullback at ray {j} depends on the chart: {vals}"
    return out


# constructors


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = list(itertools.combinations(range(n + 1), n))
    return Fan(n, tuple(rays), tuple(cones))


def hirzebruch(a: int) -> Fan:
    """Hirzebruch surface F_a with rays (1,0), (0,1), (-1,a), (0,-1)."""
    return Fan(2, ((1, 0), (0, 1), (-1, a), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


def affine_space(n: int) -> Fan:
    return Fan(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (tuple(range(n)),))


def product(F: Fan, G: Fan) -> Fan:
    rays = [tuple(u) + (0,) * G.n for u in F.rays] + [(0,) * F.n + tuple(w) for w in G.rays]
    cones = [tuple(a) + tuple(F.s + b for b in c) for a in F.max_cones for c in G.max_cones]
    return Fan(F.n + G.n, tuple(rays), tuple(cones))


def star_subdivision(F: Fan, sigma: Sequence[int]) -> Fan:
    """Insert the ray along the sum of sigma's generators and re-cone its star.

    The new ray is appended after the existing ones.

    Raises:
        InvalidCone: if sigma is not a cone of F with at least two rays.
    """
    sigma = tuple(sorted(sigma))
    if len(sigma) < 2 or not is_cone(F, sigma):
        raise InvalidCone(f"{list(sigma)} is not a cone of the fan with at least two rays")
    new = primitive(tuple(sum(F.rays[i][k] for i in sigma) for k in range(F.n)))
    idx = F.s
    cones = []
    for c in F.max_cones:
        if set(sigma) <= set(c):
            for r in sigma:
                cones.append(tuple(sorted((set(c) - {r}) | {idx})))
        else:
            cones.append(c)
    return Fan(F.n, F.rays + (new,), tuple(cones))
