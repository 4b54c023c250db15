"""Fairness-agnostic aggregation from closest fair rankings of inputs and of
feedback-arc-set orderings of every input triple, plus a sampled fast path
that scores candidates against a weighted coreset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .aggregate import DP_CAP, kwiksort_tournament, min_linear_ordering
from .closest_fair import closest_fair_ranking
from .core import (
    Instance, InvalidInput, Ranking, WeightedRankingSet, as_ranking, objective,
    weighted_objective,
)
from .tournament import CountTournament, MajorityTournament, majority_tournament

FAS_MODES = ("exact", "heuristic", "auto")


@dataclass(frozen=True)
class FasResult:
    ordering: Ranking
    back_edge_count: int


@dataclass(frozen=True)
class FastConfig:
    s: float = 50.0
    gamma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if not self.s > 1:
            raise InvalidInput("oversampling constant s must exceed 1")
        if not 0 < self.gamma < 1:
            raise InvalidInput("gamma must lie in (0, 1)")


def back_edges(G: MajorityTournament, order) -> int:
    idx = [G.elements.index(v) for v in order]
    a = G.adj[np.ix_(idx, idx)]
    return int(np.tril(a, -1).sum())


def _local_search(adj: np.ndarray, order: list[int]) -> list[int]:
    """Single-vertex moves until no move removes a back edge."""
    m = len(order)
    # gain[w, v]: change in back edges when v moves from just below w to just above it
    gain = adj.astype(np.int64) - adj.T.astype(np.int64)
    improved = True
    while improved:
        improved = False
        for i in range(m):
            v = order[i]
            best_delta, best_j = 0, i
            delta = 0
            for j in range(i - 1, -1, -1):  # move v above order[j]
                delta += gain[order[j], v]
                if delta < best_delta:
                    best_delta, best_j = delta, j
            delta = 0
            for j in range(i + 1, m):  # move v below order[j]
                delta += gain[v, order[j]]
                if delta < best_delta:
                    best_delta, best_j = delta, j
            if best_j != i:
                order.pop(i)
                order.insert(best_j, v)
                improved = True
                break
    return order


def fas_order(G: MajorityTournament, mode: str = "exact", seed=0,
              cap: int = DP_CAP) -> FasResult:
    """Ordering of a majority tournament with few back edges.

    ``exact`` runs the subset DP (d <= cap) and is optimal; ``heuristic``
    pivots like KwikSort and then applies single-vertex moves. The ordering
    is a topological order of the graph minus its back edges.
    """
    if mode == "auto":
        mode = "exact" if G.d <= cap else "heuristic"
    adj = G.adj.astype(np.int64)
    if mode == "exact":
        idx, _ = min_linear_ordering(adj, cap)
    elif mode == "heuristic":
        T = CountTournament(1, adj, tuple(range(G.d)))
        idx = list(kwiksort_tournament(T, np.random.default_rng(seed)))
        idx = _local_search(G.adj, idx)
    else:
        raise InvalidInput(f"unknown FAS mode {mode!r}")
    order = tuple(G.elements[i] for i in idx)
    return FasResult(Ranking(order), back_edges(G, order))


def _triple_seeds(seed, count: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1)[0]) for c in ss.spawn(count)]


def candidate_rankings(inst: Instance, triples, fas_mode: str = "exact", seed=0,
                       cap: int = DP_CAP) -> list[Ranking]:
    """Closest fair rankings of every input, then of each triple's FAS order."""
    u, spec = inst.universe, inst.spec
    out = [closest_fair_ranking(p, u, spec)[0] for p in inst.rankings]
    triples = list(triples)
    seeds = _triple_seeds(seed, len(triples))
    for (i, j, k), ts in zip(triples, seeds):
        G = majority_tournament(inst.rankings[i], inst.rankings[j], inst.rankings[k])
        pi_t = fas_order(G, fas_mode, ts, cap).ordering
        out.append(closest_fair_ranking(pi_t, u, spec)[0])
    return out


def _argmin(cands, score):
    best = None
    seen = set()
    for c in cands:
        if c.order in seen:
            continue  # a repeat cannot beat its first occurrence
        seen.add(c.order)
        val = score(c)
        if best is None or val < best[1]:
            best = (c, val)
    return best


def generic_fair_ra(inst: Instance, fas_mode: str = "exact", seed=0,
                    cap: int = DP_CAP) -> tuple[Ranking, int]:
    """Minimum-objective candidate; earlier candidates win ties.

    Never worse than the best closest-fair input ranking, since those are
    candidates too. With fewer than three inputs there are no triples.
    """
    triples = itertools.combinations(range(inst.n), 3)
    cands = candidate_rankings(inst, triples, fas_mode, seed, cap)
    return _argmin(cands, lambda c: objective(inst, c))


def sampling_probability(n: int, s: float) -> float:
    return min(1.0, 4 * s * math.log(n) / n) if n > 1 else 1.0


def sample_candidates(S, config: FastConfig) -> tuple[int, ...]:
    """Indices of inputs kept, each independently with prob. min(1, 4 s ln n / n)."""
    n = len(S)
    p = sampling_probability(n, config.s)
    if p >= 1:
        return tuple(range(n))
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
    keep = rng.random(n) < p
    return tuple(int(i) for i in np.flatnonzero(keep))


def pairwise_distances(rankings) -> np.ndarray:
    """All-pairs Kendall tau matrix via pair-orientation indicator vectors."""
    pos = np.array([as_ranking(r).pos[1:] for r in rankings], dtype=np.int64)
    d = pos.shape[1]
    iu, ju = np.triu_indices(d, 1)
    B = (pos[:, iu] < pos[:, ju]).astype(np.int64)
    return B @ (1 - B).T + (1 - B) @ B.T


def coreset_size(n: int, gamma: float) -> int:
    return max(1, math.ceil(8 * gamma ** -2 * 3 * math.log(n)))


def build_coreset(S, config: FastConfig) -> WeightedRankingSet:
    """Sensitivity-sampling coreset around the best input ranking.

    Scores are each input's share of the total distance to that center plus
    1/n. Draw counts come from one multinomial; the importance weights are
    rescaled so they sum to exactly n.
    """
    S = [as_ranking(r) for r in S]
    n = len(S)
    if n == 0:
        raise InvalidInput("cannot build a coreset of no rankings")
    D = pairwise_distances(S)
    center = int(np.argmin(D.sum(axis=1)))
    dist = [int(x) for x in D[center]]
    total = sum(dist)
    if total == 0:
        probs = [Fraction(1, n)] * n
    else:
        scores = [Fraction(x, total) + Fraction(1, n) for x in dist]
        norm = sum(scores)
        probs = [sc / norm for sc in scores]
    m = coreset_size(n, config.gamma)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
    draws = rng.multinomial(m, np.array([float(p) for p in probs]))
    raw = [(i, Fraction(int(c), m) / probs[i]) for i, c in enumerate(draws) if c > 0]
    scale = Fraction(n) / sum(w for _, w in raw)
    return WeightedRankingSet(tuple((S[i], w * scale) for i, w in raw))


def generic_fair_ra_fast(inst: Instance, config: FastConfig | None = None,
                         fas_mode: str = "auto", cap: int = DP_CAP,
                         coreset: WeightedRankingSet | None = None) -> tuple[Ranking, int]:
    """Sampled variant: triples drawn only from a random subset of inputs and
    candidates scored on a coreset. The returned objective is exact.
    """
    config = config or FastConfig()
    kept = sample_candidates(inst.rankings, config)
    core = coreset if coreset is not None else build_coreset(inst.rankings, config)
    triples = itertools.combinations(kept, 3)
    cands = candidate_rankings(inst, triples, fas_mode, [config.seed, 2], cap)
    sigma, _ = _argmin(cands, lambda c: weighted_objective(core, c))
    return sigma, objective(inst, sigma)
