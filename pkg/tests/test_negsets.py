import pytest
from hypothesis import given, settings, strategies as st

from oracles import dual_oracle_mismatches
from toric_hdi.fan import hirzebruch, product, projective_space, star_subdivision
from toric_hdi.fixtures import get_fixture, octagon_fan, threefold_fan
from toric_hdi.negsets import (
    TooManyRays,
    UnboundedContribution,
    delta_J,
    h_i,
    neg_sets,
    pattern_polyhedron,
    reduced_cohomology_ranks,
    reduced_rank,
    restricted_neg_sets,
)
from toric_hdi.fan import affine_space

P1 = projective_space(1)
FANS = {
    "p2": projective_space(2),
    "p1xp1": product(P1, P1),
    "f1": hirzebruch(1),
    "threefold": threefold_fan(),
}


def test_delta_complexes():
    F1 = FANS["f1"]
    # {0,2}: two rays in no common cone -> two points, reduced H^0 of rank 1
    d = delta_J(F1, (0, 2))
    assert d.faces == frozenset({(), (0,), (2,)})
    assert reduced_cohomology_ranks(d) == (0, 1)
    # the empty complex has reduced H^{-1} = 1
    assert reduced_cohomology_ranks(delta_J(F1, ())) == (1,)
    # all rays of P^2: a circle, reduced H^1 = 1
    assert reduced_cohomology_ranks(delta_J(FANS["p2"], (0, 1, 2))) == (0, 0, 1)


def test_neg_sets_f1():
    assert neg_sets(FANS["f1"], 1) == [(0, 2), (1, 3)]
    assert neg_sets(FANS["f1"], 0) == [()]
    assert neg_sets(FANS["f1"], 2) == [(0, 1, 2, 3)]


def test_neg_sets_p2():
    assert neg_sets(FANS["p2"], 1) == []
    assert neg_sets(FANS["p2"], 2) == [(0, 1, 2)]


def test_restricted_neg_sets():
    b1 = get_fixture("b1").morphism
    assert restricted_neg_sets(b1, (1, 2), 1) == [(0, 2)]
    b2 = get_fixture("b2").morphism
    assert restricted_neg_sets(b2, (0,), 1) == [(1, 3)]
    assert restricted_neg_sets(b2, (1,), 1) == [(1, 3)]
    b3 = get_fixture("b3").morphism
    assert sorted(restricted_neg_sets(b3, (1, 2), 1)) == sorted([(1, 4), (4, 5), (1, 4, 5), (5, 6), (4, 5, 6)])


def test_pattern_polyhedron_tightens():
    P = pattern_polyhedron(FANS["f1"], (0, 5, 0, 0), (0, 2), rays=(0, 1, 2))
    assert all(not c.strict for c in P.constraints)
    assert P.contains((-1, -2)) and not P.contains((-1, -1))


def test_h_i_examples():
    assert h_i(FANS["f1"], (0, 5, 0, 0)).h == [1, 10, 0]
    t = h_i(FANS["p2"], (2, 0, 0))
    assert t.h == [6, 0, 0]
    assert h_i(FANS["p2"], (-3, 0, 0)).h == [0, 0, 1]
    assert h_i(FANS["p1xp1"], (-2, 0, 0, 0)).h == [0, 1, 0]
    assert h_i(FANS["p1xp1"], (-2, 0, -2, 0)).h == [0, 0, 1]


def test_h_i_f1_degrees_are_the_triangle():
    t = h_i(FANS["f1"], (0, 5, 0, 0))
    h1 = sorted(m for m, r in t.degrees.items() if r[1])
    assert h1 == sorted((-i, -j) for i in range(1, 6) for j in range(1, 6) if i < j)


def test_h_i_to_dict():
    d = h_i(FANS["p2"], (1, 0, 0)).to_dict()
    assert d["h"] == [3, 0, 0]
    assert set(d["degrees"]) == {"0,0", "-1,0", "-1,1"}


def test_caps_and_unbounded():
    with pytest.raises(TooManyRays):
        neg_sets(FANS["f1"], 1, cap=3)
    with pytest.raises(UnboundedContribution):
        h_i(affine_space(1), (0,))


def _canonical(F):
    return tuple([-1] * F.s)


@pytest.mark.parametrize("name", ["p2", "p1xp1", "f1"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_serre_duality(name, data):
    F = FANS[name]
    D = data.draw(st.lists(st.integers(-5, 5), min_size=F.s, max_size=F.s))
    K = _canonical(F)
    h = h_i(F, D).h
    hd = h_i(F, [k - d for k, d in zip(K, D)]).h
    assert h == hd[::-1]


@pytest.mark.parametrize("name", ["p2", "p1xp1", "f1"])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_dual_oracle_surfaces(name, data):
    F = FANS[name]
    assert not dual_oracle_mismatches(F, data.draw(st.lists(st.integers(-6, 6), min_size=F.s, max_size=F.s)))


def test_dual_oracle_octagon():
    assert not dual_oracle_mismatches(octagon_fan(), (1, -1, 0, 0, 0, -2, 0, 1))
    assert not dual_oracle_mismatches(octagon_fan(), (-2, 0, -1, 0, -3, 0, 1, 0))


def test_reduced_rank_lookup():
    F1 = FANS["f1"]
    assert reduced_rank(F1, (0, 2), 1) == 1
    assert reduced_rank(F1, (0, 1), 1) == 0
    assert reduced_rank(F1, (0, 1, 2, 3), 2) == 1
    assert reduced_rank(F1, (0, 1, 2, 3), 7) == 0
