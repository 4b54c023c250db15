"""Optimal colorful bi-partition of a count tournament.

A bi-partition picks a top set L of size k; its cost is the total count on
arcs entering L from the complement. With n_ab + n_ba = n every vertex pair
inside L contributes exactly n, so cost(L) = sum of in-degrees over L minus
n * C(k, 2) and the greedy on in-degrees below is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import FairnessSpec, GroupedUniverse, InfeasibleSpec, InvalidInput, check_feasible
from .tournament import CountTournament

ORACLE_LIMIT = 10_000_000


class TooLarge(ValueError):
    """An exhaustive routine was asked to enumerate beyond its budget."""


@dataclass(frozen=True)
class Bipartition:
    L: frozenset[int]
    d: int

    @property
    def R(self) -> frozenset[int]:
        return frozenset(range(1, self.d + 1)) - self.L

    @property
    def k(self) -> int:
        return len(self.L)


def cut_cost(T: CountTournament, L) -> int:
    """Total count on arcs y -> x with x in L and y outside L."""
    mask = np.zeros(T.d, dtype=bool)
    for v in L:
        mask[T.index[v]] = True
    return int(T.counts[np.ix_(~mask, mask)].sum())


def is_colorful(L, u: GroupedUniverse, spec: FairnessSpec) -> bool:
    if len(L) != spec.k:
        return False
    counts = [0] * u.g
    for v in L:
        counts[u.group(v) - 1] += 1
    return all(spec.lower(i) <= counts[i - 1] <= spec.upper(i) for i in range(1, u.g + 1))


def _full_universe(T: CountTournament, u: GroupedUniverse) -> None:
    if T.elements != tuple(range(1, u.d + 1)):
        raise InvalidInput("tournament vertices must be the universe 1..d")


def col_bipartition(T: CountTournament, u: GroupedUniverse, spec: FairnessSpec) -> Bipartition:
    """Minimum-cost colorful top set of size ``spec.k``.

    Seeds each group with its lowest in-degree members up to the lower bound,
    then fills by ascending in-degree, skipping groups at their upper bound.
    Ties go to the smaller candidate id.
    """
    _full_universe(T, u)
    check_feasible(u, spec)
    deg = T.in_degrees()
    key = lambda v: (int(deg[v - 1]), v)

    L: list[int] = []
    taken = [0] * u.g
    chosen = set()
    for i in range(1, u.g + 1):
        need = spec.lower(i)
        for v in sorted(u.members(i), key=key)[:need]:
            L.append(v)
            chosen.add(v)
        taken[i - 1] = need

    for v in sorted((v for v in range(1, u.d + 1) if v not in chosen), key=key):
        if len(L) >= spec.k:
            break
        i = u.group(v)
        if taken[i - 1] < spec.upper(i):
            L.append(v)
            taken[i - 1] += 1

    if len(L) != spec.k:
        raise InfeasibleSpec("no colorful set of size k exists")
    return Bipartition(frozenset(L), u.d)


def colorful_subsets(u: GroupedUniverse, spec: FairnessSpec, limit: int = ORACLE_LIMIT):
    """Yield every colorful size-k subset as a sorted tuple, lexicographically."""
    total = math.comb(u.d, spec.k)
    if total > limit:
        raise TooLarge(f"C({u.d},{spec.k}) = {total} subsets exceeds {limit}")
    for L in itertools.combinations(range(1, u.d + 1), spec.k):
        if is_colorful(L, u, spec):
            yield L


def bipartition_oracle(T: CountTournament, u: GroupedUniverse, spec: FairnessSpec,
                       limit: int = ORACLE_LIMIT) -> tuple[frozenset[int], int]:
    """Exhaustive minimum over colorful subsets; lexicographically first argmin."""
    _full_universe(T, u)
    if spec.g != u.g:
        raise InvalidInput("group count mismatch")
    best = None
    for L in colorful_subsets(u, spec, limit):
        c = cut_cost(T, L)
        if best is None or c < best[1]:
            best = (frozenset(L), c)
    if best is None:
        raise InfeasibleSpec("no colorful subset exists")
    return best


def swap_cost_delta(T: CountTournament, L, x: int, y: int) -> int:
    L = frozenset(L)
    if x not in L:
        raise InvalidInput(f"{x} is not in L")
    if y in L:
        raise InvalidInput(f"{y} is already in L")
    return cut_cost(T, (L - {x}) | {y}) - cut_cost(T, L)
