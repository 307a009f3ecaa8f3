"""Worked examples shipped with the library and the CLI.

Fans: ``f1`` (Hirzebruch F1), ``p2``, ``p1xp1``.
Morphisms, each with a default divisor, degree i and class-degree grid:

* ``b1``: the blowdown F1 -> P^2 with D = 5 times the exceptional curve.
* ``b2``: the ruling F1 -> P^1 with D = -2 times the exceptional curve.
* ``b3``: the blowup of F1 x P^1 along a curve, mapped to F1.
* ``b4``: the blowup of P^1 x P^1 at the four fixed points, mapped to P^1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fan import Fan, ToricMorphism, hirzebruch, product, projective_space, star_subdivision
from .linalg import IntMatrix


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    fan: Fan | None = None
    morphism: ToricMorphism | None = None
    divisor: tuple[int, ...] | None = None
    i: int = 1
    degree_grid: tuple[tuple[int, ...], ...] = field(default=())
    gen_box: int = 4

    @property
    def source(self) -> Fan:
        return self.morphism.source if self.morphism is not None else self.fan

    def to_dict(self) -> dict:
        out = {"name": self.name, "description": self.description}
        if self.morphism is not None:
            out["morphism"] = self.morphism.to_dict()
            out["i"] = self.i
            out["degree_grid"] = [list(d) for d in self.degree_grid]
        else:
            out["fan"] = self.fan.to_dict()
        if self.divisor is not None:
            out["divisor"] = list(self.divisor)
        return out


def octagon_fan() -> Fan:
    """P^1 x P^1 blown up at its four fixed points."""
    rays = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
    return Fan(2, rays, tuple((k, (k + 1) % 8) for k in range(8)))


def threefold_fan() -> Fan:
    """F1 x P^1 with the cone spanned by (0,1,0), (0,0,1) subdivided."""
    return star_subdivision(product(hirzebruch(1), projective_space(1)), (1, 4))


def _grid(*ranges):
    out = [()]
    for r in ranges:
        out = [p + (x,) for p in out for x in r]
    return tuple(out)


def fixtures() -> list[Fixture]:
    f1, p1, p2 = hirzebruch(1), projective_space(1), projective_space(2)
    return [
        Fixture("f1", "Hirzebruch surface F1", fan=f1, divisor=(0, 5, 0, 0)),
        Fixture("p2", "projective plane", fan=p2, divisor=(2, 0, 0)),
        Fixture("p1xp1", "P^1 x P^1", fan=product(p1, p1), divisor=(0, 0, 0, 0)),
        Fixture(
            "b1",
            "blowdown F1 -> P^2, D = 5 times the exceptional curve",
            morphism=ToricMorphism(f1, p2, IntMatrix.from_rows([[0, -1], [1, 0]])),
            divisor=(0, 5, 0, 0),
            degree_grid=_grid(range(0, 9)),
        ),
        Fixture(
            "b2",
            "ruling F1 -> P^1, D = -2 times the exceptional curve",
            morphism=ToricMorphism(f1, p1, IntMatrix.from_rows([[1, 0]])),
            divisor=(0, -2, 0, 0),
            degree_grid=_grid(range(-2, 5)),
        ),
        Fixture(
            "b3",
            "blowup of F1 x P^1 along a curve, projected to F1",
            morphism=ToricMorphism(threefold_fan(), f1, IntMatrix.from_rows([[1, 0, 0], [0, 1, 0]])),
            divisor=(0, 0, 0, 0, 0, -2, -2),
            degree_grid=_grid(range(0, 5), range(0, 5)),
            gen_box=3,
        ),
        Fixture(
            "b4",
            "P^1 x P^1 blown up at four fixed points, projected to P^1",
            morphism=ToricMorphism(octagon_fan(), p1, IntMatrix.from_rows([[1, 0]])),
            divisor=(1, -1, 0, 0, 0, -2, 0, 1),
            degree_grid=_grid(range(-2, 5)),
        ),
    ]


def get_fixture(name: str) -> Fixture:
    for fx in fixtures():
        if fx.name == name:
            return fx
    raise KeyError(f"unknown fixture {name!r}; available: {', '.join(f.name for f in fixtures())}")
