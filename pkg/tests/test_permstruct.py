import itertools

import pytest

from permlat.errors import MissingMeetIrreducibleError
from permlat.generic import GenerationConfig, generate_generic
from permlat.lattice import b2_plus_top, lattices_isomorphic, meet_irreducibles
from permlat.permstruct import (PermStructure, cameron_enumeration, decode_relations,
                                encode_orders, profile, two_order_catalog_parameters,
                                _linear_ranks)
from permlat.spaces import LambdaSpace
from permlat.sqorders import OrderedLambdaStructure, SubquotientOrder


def gen(lat, sig, seed=11, size=40, depth=2):
    cfg = GenerationConfig(seed=seed, target_size=size, saturation_depth=depth)
    return generate_generic(lat, sig, cfg, with_saturation_report=False).structure


@pytest.fixture
def block8(chain3):
    # hand-built 8-point 3-chain structure: 4 E-blocks of 2, within-order and
    # between-order explicit
    dd = {}
    for i, j in itertools.combinations(range(8), 2):
        dd[(f"x{i}", f"x{j}")] = "E" if i // 2 == j // 2 else "1"
    space = LambdaSpace.from_distances(chain3, [f"x{i}" for i in range(8)], dd)
    within = SubquotientOrder.from_ranks(space, "0", "E",
                                         {f"x{i}": i % 2 for i in range(8)})
    between = SubquotientOrder.from_ranks(space, "E", "1",
                                          {f"x{i}": i // 2 for i in range(0, 8, 2)})
    return OrderedLambdaStructure(space, (within, between))


def test_encode_three_chain_worked_example(block8, chain3):
    # two emitted orders; same E-block iff the orders disagree
    enc = encode_orders(block8, seed=4)
    assert enc.emitted == 2
    p = enc.perm
    for x, y in itertools.permutations(p.points, 2):
        same_block = block8.space.d(x, y) == "E"
        disagree = p.less(0, x, y) == p.less(1, y, x)
        assert same_block == disagree
    # codebook recovers both input orders exactly
    for idx, o in enumerate(block8.orders):
        vs = enc.codebook.order_vectors[idx]
        for x, y in itertools.permutations(p.points, 2):
            assert o.less(x, y) == (p.vector(x, y) in vs)


def test_encode_requires_all_meet_irreducibles(chain3):
    s = gen(chain3, [("E", "1")], size=8)  # bottom 0 has no order
    with pytest.raises(MissingMeetIrreducibleError):
        encode_orders(s)


def test_two_generic_orders_encode_as_themselves(chain2):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = gen(chain2, [("0", "1"), ("0", "1")], size=20)
    enc = encode_orders(s, seed=1)
    assert enc.emitted == 2
    assert enc.codebook.relation_vectors["1"] == frozenset(
        {(0, 0), (0, 1), (1, 0), (1, 1)})
    dec = decode_relations(enc.perm)
    assert len(dec.relations) == 2  # only equality and the trivial relation


def test_b2_plus_point_round_trip():
    lat = b2_plus_top()
    mi = meet_irreducibles(lat)
    sig = [(e, mi.cover[e]) for e in mi.elements]
    s = gen(lat, sig, size=50, depth=3, seed=5)
    enc = encode_orders(s, seed=5)
    assert enc.emitted <= enc.bound
    dec = decode_relations(enc.perm)
    assert lattices_isomorphic(dec.lattice, lat)
    assert dec.distributive


def test_decode_identity_structure():
    ranks = tuple(range(20))
    p = PermStructure(tuple(f"v{i}" for i in range(20)), (ranks, ranks))
    dec = decode_relations(p)
    assert len(dec.relations) == 2
    assert dec.relations[0].partition == tuple((x,) for x in p.points)
    assert len(dec.relations[1].partition) == 1


def test_decoded_meet_irreducibles_are_convex_somewhere(block8):
    enc = encode_orders(block8, seed=2)
    dec = decode_relations(enc.perm)
    for r in dec.relations:
        if r.meet_irreducible:
            assert len(r.convex_in_orders) >= 1


def test_recovered_lattice_distributive_on_catalog_samples(chain4):
    mi = meet_irreducibles(chain4)
    sig = [(e, mi.cover[e]) for e in mi.elements]
    s = gen(chain4, sig, size=40, depth=2, seed=9)
    dec = decode_relations(encode_orders(s, seed=9).perm)
    assert dec.distributive


# -- profiles -----------------------------------------------------------------


def test_profile_identity_structure_two_types():
    ranks = tuple(range(10))
    p = PermStructure(tuple(f"v{i}" for i in range(10)), (ranks, ranks))
    assert len(profile(p, 2)) == 2


def test_profile_generic_two_orders_four_types(chain2):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = gen(chain2, [("0", "1"), ("0", "1")], size=30, depth=3)
    p = PermStructure(s.space.points, tuple(_linear_ranks(o) for o in s.orders))
    assert len(profile(p, 2)) == 4


def test_reversal_and_identity_profiles_differ():
    ranks = tuple(range(10))
    rev = tuple(9 - r for r in ranks)
    ident = PermStructure(tuple(f"v{i}" for i in range(10)), (ranks, ranks))
    reversal = PermStructure(tuple(f"v{i}" for i in range(10)), (ranks, rev))
    assert set(profile(ident, 2)) != set(profile(reversal, 2))


# -- the two-order catalog ----------------------------------------------------


def test_cameron_five_distinct_profiles():
    result = cameron_enumeration(30, seed=3)
    assert result.distinct == len(two_order_catalog_parameters()) == 5


def test_three_chain_block_instances_are_mutually_reverse():
    result = cameron_enumeration(30, seed=3)
    a = dict(result.profiles[("3chain", "within-reversed")])
    b = dict(result.profiles[("3chain", "between-reversed")])

    def flip_second_order(key):
        # reverse order 2 in every pair vector of the type key
        return tuple(v ^ 0b10 for v in key)

    assert {flip_second_order(k): c for k, c in a.items()} == b


def test_equal_orders_profile_is_doubled_linear_order():
    result = cameron_enumeration(30, seed=3)
    prof = dict(result.profiles[("2chain", "equal")])
    # both orders agree on every pair: vectors 0b11 and 0b00 only
    for key in prof:
        assert set(key) <= {0b00, 0b11}
