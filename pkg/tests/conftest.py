import pytest

from permlat.lattice import boolean2, chain_lattice, product_lattice


@pytest.fixture
def chain2():
    return chain_lattice(2, ["0", "1"])


@pytest.fixture
def chain3():
    return chain_lattice(3, ["0", "E", "1"])


@pytest.fixture
def chain4():
    return chain_lattice(4, ["0", "e", "f", "1"])


@pytest.fixture
def b2():
    return boolean2()


@pytest.fixture
def grid():
    return product_lattice(chain_lattice(3, ["0", "m", "M"]),
                           chain_lattice(2, ["z", "o"]))
