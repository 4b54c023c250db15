"""Unconstrained rank aggregation back-ends and the two-stage fair pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bipartition import TooLarge, col_bipartition
from .closest_fair import closest_fair_ranking
from .core import Instance, InvalidInput, Ranking, concat, objective, restrict
from .tournament import CountTournament, build_tournament

DP_CAP = 15


@dataclass(frozen=True)
class AggregatorChoice:
    kind: str = "kwiksort"  # "kwiksort" or "exact-dp"
    seed: int = 0
    dp_cap: int = DP_CAP

    def __post_init__(self):
        if self.kind not in ("kwiksort", "exact-dp"):
            raise InvalidInput(f"unknown aggregator {self.kind!r}")


@lru_cache(maxsize=None)
def _dp_tables(m: int):
    """Bit matrix of all masks, and per-size layers of (masks, predecessor) tables.

    ``prev[r, v]`` is ``mask ^ (1 << v)`` when bit v is set, else the sentinel
    index ``2**m``.
    """
    full = 1 << m
    masks = np.arange(full, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(m)) & 1).astype(np.int64)
    popcount = bits.sum(axis=1)
    layers = []
    for p in range(1, m + 1):
        layer = np.flatnonzero(popcount == p)
        has = bits[layer].astype(bool)
        prev = np.where(has, layer[:, None] ^ (1 << np.arange(m)), full)
        layers.append((layer, prev))
    return bits, layers


def min_linear_ordering(cost: np.ndarray, cap: int = DP_CAP) -> tuple[list[int], int]:
    """Order indices 0..m-1 minimising the total cost of backward pairs.

    ``cost[u, v]`` is paid when ``v`` is placed before ``u``. Subset DP in
    O(2^m * m) time; among optimal orders the lexicographically smallest
    (top first) is returned.
    """
    cost = np.asarray(cost, dtype=np.int64)
    m = len(cost)
    if m > cap:
        raise TooLarge(f"{m} elements exceeds the DP cap of {cap}")
    if m == 0:
        return [], 0
    full = 1 << m
    bits, layers = _dp_tables(m)
    # into[mask, v] = sum of cost[u, v] over u in mask; row `full` is a sentinel
    into = np.zeros((full + 1, m), dtype=np.int64)
    into[:full] = bits @ cost
    inf = np.iinfo(np.int64).max // 4
    # best[mask]: cheapest ordering of the candidates in mask, all of which
    # sit below everything outside mask
    best = np.full(full + 1, inf, dtype=np.int64)
    best[0] = 0
    cols = np.arange(m)
    for layer, prev in layers:
        best[layer] = (best[prev] + into[prev, cols]).min(axis=1)

    best_l, into_l = best.tolist(), into.tolist()
    order = []
    mask = full - 1
    while mask:
        for v in range(m):
            if mask >> v & 1:
                rest = mask ^ (1 << v)
                if best_l[rest] + into_l[rest][v] == best_l[mask]:
                    order.append(v)
                    mask = rest
                    break
    return order, best_l[full - 1]


def _sub_rankings(S) -> list[tuple[int, ...]]:
    out = [tuple(r.order) if isinstance(r, Ranking) else tuple(r) for r in S]
    if not out:
        raise InvalidInput("no rankings to aggregate")
    return out


def kemeny_from_tournament(T: CountTournament, cap: int = DP_CAP) -> tuple[tuple[int, ...], int]:
    order, cost = min_linear_ordering(T.counts, cap)
    return tuple(T.elements[i] for i in order), cost


def exact_aggregate(S, cap: int = DP_CAP) -> tuple[tuple[int, ...], int]:
    """Optimal Kemeny aggregate of rankings over a common element set.

    Ties between optimal rankings resolve to the lexicographically smallest.
    """
    S = _sub_rankings(S)
    if len(S[0]) > cap:
        raise TooLarge(f"{len(S[0])} elements exceeds the DP cap of {cap}")
    return kemeny_from_tournament(build_tournament(S), cap)


def kwiksort_tournament(T: CountTournament, rng: np.random.Generator) -> tuple[int, ...]:
    c = T.counts
    out: list[int] = []
    # explicit stack of pending blocks; a bare int is an already placed pivot
    stack: list = [list(range(T.d))]
    while stack:
        item = stack.pop()
        if isinstance(item, int):
            out.append(item)
            continue
        if len(item) <= 1:
            out.extend(item)
            continue
        p = item[int(rng.integers(len(item)))]
        left = [v for v in item if v != p and c[v, p] > c[p, v]]
        right = [v for v in item if v != p and not c[v, p] > c[p, v]]
        stack.extend([right, p, left])
    return tuple(T.elements[i] for i in out)


def kwiksort(S, seed=0) -> tuple[int, ...]:
    """Random-pivot quicksort on pairwise majorities.

    An element goes above the pivot only on a strict majority; ties go below.
    """
    S = _sub_rankings(S)
    T = build_tournament(S, elements=tuple(sorted(S[0])))
    return kwiksort_tournament(T, np.random.default_rng(seed))


def aggregate_block(S, inner: AggregatorChoice, seed=None) -> tuple[int, ...]:
    S = _sub_rankings(S)
    if not S[0]:
        return ()
    if inner.kind == "exact-dp":
        return exact_aggregate(S, inner.dp_cap)[0]
    return kwiksort(S, inner.seed if seed is None else seed)


def fair_aggregate(inst: Instance, inner: AggregatorChoice | None = None,
                   T: CountTournament | None = None) -> tuple[Ranking, int]:
    """Fair top set by optimal colorful bi-partition, then aggregate each side.

    With an exact inner aggregator the result is within twice the optimum.
    """
    inner = inner or AggregatorChoice()
    T = T or build_tournament(inst.rankings)
    part = col_bipartition(T, inst.universe, inst.spec)
    top = [restrict(p, part.L) for p in inst.rankings]
    bottom = [restrict(p, part.R) for p in inst.rankings]
    ss = np.random.SeedSequence(inner.seed).generate_state(2)
    sigma = concat(aggregate_block(top, inner, int(ss[0])),
                   aggregate_block(bottom, inner, int(ss[1])))
    return sigma, objective(inst, sigma)


def best_from_input(inst: Instance) -> tuple[Ranking, int]:
    """Best of the closest fair rankings to each input; first index wins ties."""
    best = None
    for pi in inst.rankings:
        sigma, _ = closest_fair_ranking(pi, inst.universe, inst.spec)
        obj = objective(inst, sigma)
        if best is None or obj < best[1]:
            best = (sigma, obj)
    return best
