import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fairrank.core import (
    FairnessSpec, GroupedUniverse, InfeasibleSpec, Instance, InvalidInput, Ranking,
    WeightedRankingSet, block_objective, check_feasible, concat, count_inversions,
    is_fair, kendall_tau, kendall_tau_blocks, kendall_tau_naive, objective,
    parse_rational, restrict, weighted_objective,
)

from conftest import brute_kendall


def perms(d):
    return st.permutations(list(range(1, d + 1)))


@st.composite
def ranking_pair(draw, max_d=12):
    d = draw(st.integers(1, max_d))
    return draw(perms(d)), draw(perms(d))


@st.composite
def ranking_triple(draw, max_d=10):
    d = draw(st.integers(1, max_d))
    return draw(perms(d)), draw(perms(d)), draw(perms(d))


def test_ranking_rejects_non_permutations():
    with pytest.raises(InvalidInput):
        Ranking((1, 1, 2))
    with pytest.raises(InvalidInput):
        Ranking((0, 1))
    with pytest.raises(InvalidInput):
        Ranking((1, 2, 4))


def test_ranking_inverse_map():
    r = Ranking((2, 6, 3, 5, 1, 4))
    assert all(r.position(r[i]) == i for i in range(6))
    assert r.before(2, 4) and not r.before(4, 2)


@pytest.mark.parametrize("a, b, expected", [
    ((1, 2, 3), (1, 2, 3), 0),
    ((1, 2, 3), (3, 2, 1), 3),
    ((2, 6, 3, 5, 1, 4), (1, 2, 3, 4, 5, 6), 8),
])
def test_kendall_tau_examples(a, b, expected):
    assert brute_kendall(a, b) == expected
    assert kendall_tau(a, b) == expected


def test_kendall_tau_dimension_mismatch():
    with pytest.raises(InvalidInput):
        kendall_tau((1, 2), (1, 2, 3))


@given(st.lists(st.integers(-50, 50), max_size=40))
def test_count_inversions_matches_quadratic(seq):
    expected = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    assert count_inversions(seq) == expected


@given(ranking_pair(max_d=200))
@settings(max_examples=200)
def test_fast_equals_naive(pair):
    a, b = pair
    assert kendall_tau(a, b) == kendall_tau_naive(a, b)


@given(ranking_triple())
@settings(max_examples=300)
def test_metric_axioms(triple):
    a, b, c = triple
    d = len(a)
    assert kendall_tau(a, a) == 0
    assert kendall_tau(a, b) == kendall_tau(b, a)
    assert kendall_tau(a, c) <= kendall_tau(a, b) + kendall_tau(b, c)
    assert 0 <= kendall_tau(a, b) <= d * (d - 1) // 2
    assert (kendall_tau(a, b) == d * (d - 1) // 2) == (tuple(b) == tuple(reversed(a)))


def test_kendall_tau_blocks_examples():
    a, b = (2, 1, 3), (1, 2, 3)
    assert kendall_tau_blocks(a, b, {1, 2}, {3}) == 0
    assert kendall_tau_blocks(a, b, {1, 2}, {1, 2}) == 1
    assert kendall_tau_blocks(a, b, {1, 2, 3}, {1, 2, 3}) == kendall_tau(a, b)
    assert kendall_tau_blocks((1, 2, 3), (1, 2, 3), {1}, {2, 3}) == 0
    with pytest.raises(InvalidInput):
        kendall_tau_blocks(a, b, {4}, {1})


def test_kendall_tau_blocks_symmetric_in_blocks():
    a, b = (4, 2, 1, 3), (1, 2, 3, 4)
    assert kendall_tau_blocks(a, b, {1, 4}, {2, 3}) == kendall_tau_blocks(a, b, {2, 3}, {1, 4})


@given(ranking_pair(max_d=9), st.data())
@settings(max_examples=200)
def test_decomposition_identity(pair, data):
    a, b = pair
    d = len(a)
    L = frozenset(data.draw(st.sets(st.integers(1, d))))
    R = frozenset(range(1, d + 1)) - L
    total = kendall_tau_blocks(a, b, L, L) + kendall_tau_blocks(a, b, R, R) + kendall_tau_blocks(a, b, L, R)
    assert total == kendall_tau(a, b)


def test_objective_examples(tight11):
    S = tight11.rankings
    assert objective([(3, 1, 2, 4)], (3, 1, 2, 4)) == 0
    assert objective(S, (3, 1, 2, 4)) == 3
    assert objective(S, (3, 2, 1, 4)) == 5
    assert objective(S, (3, 2, 1, 4)) == sum(brute_kendall(p, (3, 2, 1, 4)) for p in S)
    assert objective(tight11, (3, 1, 2, 4)) == 3


def test_block_objective_sums_to_total(tight11):
    sigma = (3, 2, 1, 4)
    L, R = {2, 3}, {1, 4}
    parts = [block_objective(tight11, sigma, X, Y) for X, Y in ((L, L), (R, R), (L, R))]
    assert sum(parts) == objective(tight11, sigma)


def test_weighted_objective_examples():
    P = WeightedRankingSet((((1, 2, 3), Fraction(1, 2)), ((3, 2, 1), Fraction(3, 2))))
    assert weighted_objective(P, (1, 2, 3)) == Fraction(9, 2)
    assert weighted_objective(WeightedRankingSet((((2, 1, 3), 2),)), (2, 1, 3)) == 0
    S = [(1, 2, 3), (3, 1, 2), (2, 3, 1)]
    unit = WeightedRankingSet(tuple((r, 1) for r in S))
    assert weighted_objective(unit, (1, 3, 2)) == objective(S, (1, 3, 2))


def test_weighted_set_rejects_nonpositive_weights():
    with pytest.raises(InvalidInput):
        WeightedRankingSet((((1, 2), 0),))


def test_restrict_and_concat():
    pi = (2, 6, 3, 5, 1, 4)
    assert restrict(pi, {1, 2, 3}) == (2, 3, 1)
    assert restrict(pi, set(range(1, 7))) == pi
    assert restrict(pi, set()) == ()
    assert concat((1, 3), (2, 4)).order == (1, 3, 2, 4)
    assert concat((), pi).order == pi
    with pytest.raises(InvalidInput):
        concat((1, 2), (2, 3))
    with pytest.raises(InvalidInput):
        concat((1,), (3,))


@given(perms(8), st.integers(0, 8))
def test_restrict_concat_round_trip(pi, k):
    L = set(pi[:k])
    R = set(pi[k:])
    assert concat(restrict(pi, L), restrict(pi, R)).order == tuple(pi)


def test_parse_rational_is_exact():
    assert parse_rational("0.1") * 10 == 1
    assert parse_rational(0.1) == Fraction(1, 10)
    assert parse_rational("2/3") == Fraction(2, 3)
    with pytest.raises(InvalidInput):
        parse_rational("x")


def test_fairness_spec_bounds_use_exact_arithmetic():
    assert math.floor(0.57 * 100) == 56  # the float trap being avoided
    spec = FairnessSpec(("0.57",), ("0.57",), 100)
    assert spec.lower(1) == 57
    assert spec.upper(1) == 57
    assert FairnessSpec(("1/3",), ("1/3",), 3).lower(1) == 1
    with pytest.raises(InvalidInput):
        FairnessSpec(("1/2",), ("1/3",), 3)


def test_is_fair_examples():
    u = GroupedUniverse((2, 2, 1, 1), 2)
    spec = FairnessSpec(("1/2", "1/2"), ("1/2", "1/2"), 2)
    assert is_fair((3, 1, 2, 4), u, spec)
    assert not is_fair((1, 2, 3, 4), u, spec)
    free = FairnessSpec.unconstrained(2, 2)
    assert all(is_fair(p, u, free) for p in itertools.permutations(range(1, 5)))


def test_small_tight_spec_accepts_optimal_ranking(tight11):
    assert is_fair((3, 1, 2, 4), tight11.universe, tight11.spec)


@given(perms(7), st.integers(1, 7), st.randoms(use_true_random=False))
def test_is_fair_invariant_within_blocks(pi, k, rnd):
    u = GroupedUniverse((1, 2, 1, 2, 1, 2, 1), 2)
    spec = FairnessSpec(("1/3", "1/3"), ("2/3", "2/3"), k)
    top, bottom = list(pi[:k]), list(pi[k:])
    rnd.shuffle(top)
    rnd.shuffle(bottom)
    assert is_fair(pi, u, spec) == is_fair(top + bottom, u, spec)


def test_feasibility_checks():
    u = GroupedUniverse((1, 1, 2), 2)
    check_feasible(u, FairnessSpec(("1/2", "1/2"), ("1", "1"), 2))
    with pytest.raises(InfeasibleSpec):
        check_feasible(u, FairnessSpec(("1", "0"), ("1", "1"), 3))  # group 1 has only 2 members
    with pytest.raises(InfeasibleSpec):
        check_feasible(u, FairnessSpec(("0", "0"), ("0", "0"), 2))  # upper bounds too tight
    with pytest.raises(InfeasibleSpec):
        Instance(u, FairnessSpec(("0", "0"), ("0", "0"), 2), ((1, 2, 3),))


def test_instance_validation():
    u = GroupedUniverse((1, 1, 2), 2)
    spec = FairnessSpec.unconstrained(2, 1)
    with pytest.raises(InvalidInput):
        Instance(u, spec, ())
    with pytest.raises(InvalidInput):
        Instance(u, spec, ((1, 2),))
    with pytest.raises(InvalidInput):
        GroupedUniverse((1, 3), 2)
