"""Closest fair ranking to a single input ranking under Kendall tau."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .bipartition import TooLarge, col_bipartition, colorful_subsets, cut_cost
from .core import (
    FairnessSpec, GroupedUniverse, Ranking, as_ranking, check_feasible, concat,
    kendall_tau, restrict,
)
from .tournament import single_ranking_tournament

PERMUTATION_LIMIT = 8


def closest_fair_ranking(pi, u: GroupedUniverse, spec: FairnessSpec) -> tuple[Ranking, int]:
    """Fair ranking nearest to ``pi``, and its distance.

    In the tournament of a single ranking the in-degree of a candidate is its
    position, so the optimal top set is the colorful set that stays as high
    in ``pi`` as the bounds allow. Both blocks keep ``pi``'s relative order.
    """
    pi = as_ranking(pi)
    T = single_ranking_tournament(pi)
    part = col_bipartition(T, u, spec)
    sigma = concat(restrict(pi, part.L), restrict(pi, part.R))
    return sigma, cut_cost(T, part.L)


def _all_permutations(d: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, d + 1))), dtype=np.int64)


_PERM_CACHE: dict[int, np.ndarray] = {}


def permutations_array(d: int) -> np.ndarray:
    """All d! permutations of 1..d as rows, cached (d <= 8 only)."""
    if d > PERMUTATION_LIMIT:
        raise TooLarge(f"d={d} exceeds permutation enumeration limit {PERMUTATION_LIMIT}")
    if d not in _PERM_CACHE:
        _PERM_CACHE[d] = _all_permutations(d)
    return _PERM_CACHE[d]


def distances_to_all(pi, perms: np.ndarray) -> np.ndarray:
    """Kendall tau from ``pi`` to every row of ``perms``, by direct pair scan."""
    pi = as_ranking(pi)
    pos = np.array(pi.pos, dtype=np.int64)
    q = pos[perms]  # position in pi of each placed candidate
    d = perms.shape[1]
    out = np.zeros(len(perms), dtype=np.int64)
    for i in range(d):
        for j in range(i + 1, d):
            out += q[:, i] > q[:, j]
    return out


def fair_mask(perms: np.ndarray, u: GroupedUniverse, spec: FairnessSpec) -> np.ndarray:
    groups = np.array((0,) + u.group_of, dtype=np.int64)
    top = groups[perms[:, :spec.k]]
    ok = np.ones(len(perms), dtype=bool)
    for i in range(1, u.g + 1):
        c = (top == i).sum(axis=1)
        ok &= (c >= spec.lower(i)) & (c <= spec.upper(i))
    return ok


def _oracle_by_permutations(pi: Ranking, u, spec) -> tuple[Ranking, int]:
    perms = permutations_array(pi.d)
    ok = fair_mask(perms, u, spec)
    dist = np.where(ok, distances_to_all(pi, perms), np.iinfo(np.int64).max)
    i = int(np.argmin(dist))
    return Ranking(tuple(int(v) for v in perms[i])), int(dist[i])


def _oracle_by_subsets(pi: Ranking, u, spec) -> tuple[Ranking, int]:
    best = None
    universe = frozenset(range(1, pi.d + 1))
    for L in colorful_subsets(u, spec):
        sigma = concat(restrict(pi, L), restrict(pi, universe - set(L)))
        dist = kendall_tau(pi, sigma)
        if best is None or dist < best[1]:
            best = (sigma, dist)
    return best


def closest_fair_oracle(pi, u: GroupedUniverse, spec: FairnessSpec,
                        mode: str = "auto") -> tuple[Ranking, int]:
    """Exhaustive closest fair ranking.

    ``mode`` is ``"permutations"`` (all d! rankings, d <= 8), ``"subsets"``
    (every colorful top set with both blocks in ``pi`` order) or ``"auto"``,
    which runs both when d <= 8 and insists they agree.
    """
    pi = as_ranking(pi)
    check_feasible(u, spec)
    if mode == "permutations":
        return _oracle_by_permutations(pi, u, spec)
    if mode == "subsets":
        return _oracle_by_subsets(pi, u, spec)
    if mode != "auto":
        raise ValueError(f"unknown oracle mode {mode!r}")
    if pi.d <= PERMUTATION_LIMIT:
        a = _oracle_by_permutations(pi, u, spec)
        b = _oracle_by_subsets(pi, u, spec)
        if a[1] != b[1]:
            raise AssertionError(f"oracle modes disagree: {a[1]} vs {b[1]}")
        return a
    if math.comb(pi.d, spec.k) > 10_000_000:
        raise TooLarge(f"d={pi.d} too large for either enumeration")
    return _oracle_by_subsets(pi, u, spec)
