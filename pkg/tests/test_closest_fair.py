import itertools

import numpy as np
import pytest

from fairrank.closest_fair import closest_fair_oracle, closest_fair_ranking
from fairrank.core import FairnessSpec, GroupedUniverse, InfeasibleSpec, Ranking, is_fair, kendall_tau
from fairrank.harness import random_feasible_spec

from conftest import brute_kendall

U4 = GroupedUniverse((1, 1, 2, 2), 2)
HALF = FairnessSpec(("1/2", "1/2"), ("1/2", "1/2"), 2)


def brute_closest(pi, u, spec):
    best = min(
        (brute_kendall(pi, p), p)
        for p in itertools.permutations(range(1, len(pi) + 1))
        if is_fair(p, u, spec)
    )
    return best


def test_example_two_groups():
    assert brute_closest((1, 2, 3, 4), U4, HALF) == (1, (1, 3, 2, 4))
    sigma, dist = closest_fair_ranking((1, 2, 3, 4), U4, HALF)
    assert sigma.order == (1, 3, 2, 4) and dist == 1


def test_fair_input_is_fixed_point():
    sigma, dist = closest_fair_ranking((1, 3, 2, 4), U4, HALF)
    assert sigma.order == (1, 3, 2, 4) and dist == 0


def test_small_tight_optimum_is_fair(tight11):
    sigma, dist = closest_fair_ranking((3, 1, 2, 4), tight11.universe, tight11.spec)
    assert sigma.order == (3, 1, 2, 4) and dist == 0


def test_infeasible_spec():
    u = GroupedUniverse((1, 2, 2), 2)
    with pytest.raises(InfeasibleSpec):
        closest_fair_ranking((1, 2, 3), u, FairnessSpec(("1", "0"), ("1", "1"), 2))


def test_oracle_trivial_cases(rng):
    u = GroupedUniverse((1, 2, 1, 2, 1), 2)
    for _ in range(20):
        pi = Ranking(tuple(rng.permutation(5) + 1))
        assert closest_fair_oracle(pi, u, FairnessSpec.unconstrained(2, 3))[1] == 0
        full = FairnessSpec.proportional(u, 5)
        assert closest_fair_oracle(pi, u, full)[1] == 0


def test_oracle_modes_agree(rng):
    for _ in range(60):
        d = int(rng.integers(2, 8))
        g = int(rng.integers(1, 4))
        u = GroupedUniverse(tuple(int(x) for x in rng.integers(1, g + 1, size=d)), g)
        spec = random_feasible_spec(u, int(rng.integers(1, d + 1)), rng)
        pi = Ranking(tuple(rng.permutation(d) + 1))
        a = closest_fair_oracle(pi, u, spec, mode="permutations")
        b = closest_fair_oracle(pi, u, spec, mode="subsets")
        assert a[1] == b[1]


def test_exact_fair_idempotent_and_lipschitz(rng):
    for _ in range(200):
        d = int(rng.integers(2, 9))
        g = int(rng.integers(1, 4))
        u = GroupedUniverse(tuple(int(x) for x in rng.integers(1, g + 1, size=d)), g)
        spec = random_feasible_spec(u, int(rng.integers(1, d + 1)), rng)
        pi = Ranking(tuple(rng.permutation(d) + 1))
        sigma, dist = closest_fair_ranking(pi, u, spec)
        assert is_fair(sigma, u, spec)
        assert dist == kendall_tau(pi, sigma)
        assert dist == closest_fair_oracle(pi, u, spec)[1]
        assert closest_fair_ranking(sigma, u, spec)[1] == 0
        for _ in range(5):
            rho = closest_fair_ranking(Ranking(tuple(rng.permutation(d) + 1)), u, spec)[0]
            assert dist <= kendall_tau(pi, rho)


def test_preserves_relative_order_within_blocks():
    u = GroupedUniverse((1, 1, 1, 2, 2, 2), 2)
    spec = FairnessSpec(("1/3", "1/3"), ("2/3", "2/3"), 3)
    pi = (1, 2, 3, 4, 5, 6)
    sigma, _ = closest_fair_ranking(pi, u, spec)
    top, bottom = sigma.order[:3], sigma.order[3:]
    assert list(top) == sorted(top, key=pi.index)
    assert list(bottom) == sorted(bottom, key=pi.index)
    assert np.all(np.diff([pi.index(v) for v in top]) > 0)
