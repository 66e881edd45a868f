import itertools

import pytest

from permlat.errors import InvalidFactorError, NonDistributiveError
from permlat.lattice import boolean2, chain_lattice, m3, n5
from permlat.spaces import (LambdaSpace, all_spaces, amalgam_validity_sweep,
                            amalgamation_failure_probe, canonical_amalgam,
                            equivalences_from_space, space_from_equivalences,
                            validate_space, _completion_valid)


def test_single_point_space_is_valid(b2):
    s = LambdaSpace.from_distances(b2, ["x"], {})
    assert validate_space(s).ok


def test_two_points_at_bottom_distance_invalid(b2):
    s = LambdaSpace.from_distances(b2, ["x", "y"], {("x", "y"): "0"})
    report = validate_space(s)
    assert any(v.rule == "indiscernible" for v in report.violations)


def test_three_point_space_over_b2(b2):
    s = LambdaSpace.from_distances(
        b2, ["1", "2", "3"], {("1", "2"): "a", ("2", "3"): "b", ("1", "3"): "1"})
    assert validate_space(s).ok


def test_triangle_violation_reported(chain3):
    s = LambdaSpace.from_distances(
        chain3, ["x", "y", "z"], {("x", "y"): "E", ("y", "z"): "E", ("x", "z"): "1"})
    report = validate_space(s)
    assert any(v.rule == "join-triangle" for v in report.violations)


# -- equivalence systems -----------------------------------------------------


@pytest.fixture
def b2_space(b2):
    return LambdaSpace.from_distances(
        b2, ["1", "2", "3"], {("1", "2"): "a", ("2", "3"): "b", ("1", "3"): "1"})


def test_partition_at_top_is_one_class(b2_space):
    assert equivalences_from_space(b2_space).partition("1") == (("1", "2", "3"),)


def test_partition_at_bottom_is_discrete(b2_space):
    assert equivalences_from_space(b2_space).partition("0") == (("1",), ("2",), ("3",))


def test_partition_at_atom_groups_close_pair(b2_space):
    assert equivalences_from_space(b2_space).partition("a") == (("1", "2"), ("3",))


def test_system_invariants_hold(b2_space):
    assert equivalences_from_space(b2_space).validate().ok


def test_space_from_discrete_system(chain2):
    s = LambdaSpace.from_distances(chain2, ["1", "2"], {("1", "2"): "1"})
    eq = equivalences_from_space(s)
    assert space_from_equivalences(eq).d("1", "2") == "1"


def test_space_from_one_relation_system(chain3):
    s = LambdaSpace.from_distances(
        chain3, ["1", "2", "3"], {("1", "2"): "E", ("1", "3"): "1", ("2", "3"): "1"})
    eq = equivalences_from_space(s)
    back = space_from_equivalences(eq)
    assert back.d("1", "2") == "E"
    assert back.d("1", "3") == "1" and back.d("2", "3") == "1"


def test_round_trip_small_sample(chain3):
    for s in itertools.islice(all_spaces(chain3, 3), 50):
        assert space_from_equivalences(equivalences_from_space(s)) == s


# -- canonical amalgam -------------------------------------------------------


def _brute_valid_completions(lat, base, f1, f2):
    new1 = [p for p in f1.points if p not in base.pindex]
    new2 = [p for p in f2.points if p not in base.pindex]
    pairs = [(a, b) for a in new1 for b in new2]
    out = []
    for values in itertools.product(lat.nonzero_idx(), repeat=len(pairs)):
        assigned = dict(zip(pairs, values))
        if _completion_valid(lat, base, f1, f2, assigned):
            out.append(assigned)
    return pairs, out


def test_one_base_point_amalgam_is_the_join(chain3):
    lat = chain3
    base = LambdaSpace.from_distances(lat, ["b"], {})
    f1 = LambdaSpace.from_distances(lat, ["b", "x"], {("b", "x"): "E"})
    f2 = LambdaSpace.from_distances(lat, ["b", "y"], {("b", "y"): "1"})
    result = canonical_amalgam(base, f1, f2)
    assert result.space.d("x", "y") == lat.join("E", "1")
    # brute-force: the canonical value dominates every valid completion
    pairs, completions = _brute_valid_completions(lat, base, f1, f2)
    assert completions
    canon = lat.index[result.space.d("x", "y")]
    for assigned in completions:
        assert lat.leq_idx(assigned[pairs[0]], canon)


def test_amalgam_with_f1_equal_to_base_returns_f2(b2):
    base = LambdaSpace.from_distances(b2, ["b"], {})
    f2 = LambdaSpace.from_distances(b2, ["b", "y"], {("b", "y"): "a"})
    result = canonical_amalgam(base, base, f2)
    assert result.space == f2


def test_empty_base_gives_top_distance(b2):
    base = LambdaSpace(b2, (), ())
    f1 = LambdaSpace.from_distances(b2, ["x"], {})
    f2 = LambdaSpace.from_distances(b2, ["y"], {})
    result = canonical_amalgam(base, f1, f2)
    assert result.space.d("x", "y") == "1"


def test_canonical_completion_is_maximal_not_minimal(chain4):
    # over base distances (v,v)/(v,v) the canonical cross value is v, yet the
    # strictly smaller completion u is also valid: the canonical amalgam is
    # the pointwise-largest completion, not the smallest
    lat = chain4
    base = LambdaSpace.from_distances(lat, ["c1", "c2"], {("c1", "c2"): "e"})
    f1 = LambdaSpace.from_distances(
        lat, ["c1", "c2", "x"], {("c1", "c2"): "e", ("x", "c1"): "f", ("x", "c2"): "f"})
    f2 = LambdaSpace.from_distances(
        lat, ["c1", "c2", "y"], {("c1", "c2"): "e", ("y", "c1"): "f", ("y", "c2"): "f"})
    result = canonical_amalgam(base, f1, f2)
    assert result.space.d("x", "y") == "f"
    pairs, completions = _brute_valid_completions(lat, base, f1, f2)
    values = {assigned[pairs[0]] for assigned in completions}
    assert lat.index["e"] in values  # smaller completion exists
    assert max(values, key=lambda v: sum(lat.leq_idx(u, v) for u in range(lat.n))) \
        == lat.index["f"]


def test_forced_identification_over_b2(b2):
    base = LambdaSpace.from_distances(b2, ["c1", "c2"], {("c1", "c2"): "1"})
    mk = lambda name: LambdaSpace.from_distances(
        b2, ["c1", "c2", name],
        {("c1", "c2"): "1", (name, "c1"): "a", (name, "c2"): "b"})
    result = canonical_amalgam(base, mk("x"), mk("y"))
    assert result.merged == {"y": "x"}
    assert validate_space(result.space).ok


def test_monotone_in_base(chain4):
    # adding base points can only lower cross distances
    lat = chain4
    base1 = LambdaSpace.from_distances(lat, ["c1"], {})
    base2 = LambdaSpace.from_distances(lat, ["c1", "c2"], {("c1", "c2"): "e"})
    f1a = LambdaSpace.from_distances(lat, ["c1", "x"], {("c1", "x"): "f"})
    f2a = LambdaSpace.from_distances(lat, ["c1", "y"], {("c1", "y"): "e"})
    f1b = LambdaSpace.from_distances(
        lat, ["c1", "c2", "x"], {("c1", "c2"): "e", ("x", "c1"): "f", ("x", "c2"): "f"})
    f2b = LambdaSpace.from_distances(
        lat, ["c1", "c2", "y"], {("c1", "c2"): "e", ("y", "c1"): "e", ("y", "c2"): "e"})
    d1 = canonical_amalgam(base1, f1a, f2a).space.d("x", "y")
    d2 = canonical_amalgam(base2, f1b, f2b).space.d("x", "y")
    assert lat.leq(d2, d1)


def test_non_distributive_lattice_rejected():
    lat = m3()
    base = LambdaSpace.from_distances(lat, ["b"], {})
    f1 = LambdaSpace.from_distances(lat, ["b", "x"], {("b", "x"): "p"})
    with pytest.raises(NonDistributiveError):
        canonical_amalgam(base, f1, f1)


def test_invalid_factor_rejected(b2):
    base = LambdaSpace.from_distances(b2, ["c"], {})
    bad = LambdaSpace.from_distances(
        b2, ["c", "x", "y"], {("c", "x"): "a", ("c", "y"): "a", ("x", "y"): "1"})
    good = LambdaSpace.from_distances(b2, ["c", "z"], {("c", "z"): "b"})
    with pytest.raises(InvalidFactorError):
        canonical_amalgam(base, bad, good)


def test_point_id_collision_is_an_error(b2):
    base = LambdaSpace.from_distances(b2, ["c"], {})
    f1 = LambdaSpace.from_distances(b2, ["c", "x"], {("c", "x"): "a"})
    with pytest.raises(ValueError):
        canonical_amalgam(base, f1, f1)


# -- failure probe -----------------------------------------------------------


def test_probe_finds_failure_for_m3():
    assert amalgamation_failure_probe(m3()) is not None


def test_probe_finds_failure_for_n5():
    assert amalgamation_failure_probe(n5()) is not None


def test_probe_finds_nothing_for_chain():
    assert amalgamation_failure_probe(chain_lattice(4), max_base=2) is None


def test_probe_finds_nothing_for_b2_despite_identifications():
    assert amalgamation_failure_probe(boolean2(), max_base=2) is None


def test_sweep_valid_on_small_lattices():
    for lat in [chain_lattice(3), boolean2()]:
        report = amalgam_validity_sweep(lat, max_base=2, max_new=2)
        assert report.instances > 0
        assert not report.failures


def test_sweep_maximality_spot_check(chain3):
    report = amalgam_validity_sweep(chain3, max_base=2, max_new=1,
                                    check_maximality=True)
    assert not report.failures
