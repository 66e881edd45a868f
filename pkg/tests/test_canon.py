import random

from hypothesis import given, settings
from hypothesis import strategies as st

from permlat.canon import canonical_key, matrix_key
from permlat.lattice import boolean2, chain_lattice, lattices_isomorphic, m3, n5


def permuted(matrix, perm):
    n = len(matrix)
    return [[matrix[perm[i]][perm[j]] for j in range(n)] for i in range(n)]


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=7))
@settings(max_examples=80, deadline=None)
def test_key_is_permutation_invariant(seed, n):
    rng = random.Random(seed)
    matrix = [[rng.randrange(3) for _ in range(n)] for _ in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    assert matrix_key(matrix) == matrix_key(permuted(matrix, perm))


def test_key_separates_non_isomorphic_small_graphs():
    path = [[1 if abs(i - j) == 1 else 0 for j in range(4)] for i in range(4)]
    cycle = [[1 if abs(i - j) in (1, 3) else 0 for j in range(4)] for i in range(4)]
    assert matrix_key(path) != matrix_key(cycle)


def test_lattice_isomorphism_ignores_labels():
    a = chain_lattice(4, ["w", "x", "y", "z"])
    b = chain_lattice(4, ["p", "q", "r", "s"])
    assert lattices_isomorphic(a, b)
    assert not lattices_isomorphic(a, boolean2())
    assert not lattices_isomorphic(m3(), n5())


def test_empty_structure_key():
    assert canonical_key(0, lambda i, j: 0) == ()
