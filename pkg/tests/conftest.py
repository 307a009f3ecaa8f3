import pytest

from toric_hdi.fan import hirzebruch, product, projective_space
from toric_hdi.fixtures import get_fixture, threefold_fan


@pytest.fixture(scope="session")
def f1():
    return hirzebruch(1)


@pytest.fixture(scope="session")
def p1():
    return projective_space(1)


@pytest.fixture(scope="session")
def p2():
    return projective_space(2)


@pytest.fixture(scope="session")
def p1xp1():
    p1 = projective_space(1)
    return product(p1, p1)


@pytest.fixture(scope="session")
def threefold():
    return threefold_fan()


@pytest.fixture(scope="session")
def b1():
    return get_fixture("b1")


@pytest.fixture(scope="session")
def b2():
    return get_fixture("b2")


@pytest.fixture(scope="session")
def b3():
    return get_fixture("b3")


@pytest.fixture(scope="session")
def b4():
    return get_fixture("b4")
