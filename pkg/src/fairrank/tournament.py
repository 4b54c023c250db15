"""Weighted tournaments built from rankings, stored as exact vote counts.

``counts[i, j]`` is the number of input rankings placing ``elements[i]``
before ``elements[j]``; the edge weight w(a, b) is ``counts / n``. Keeping
integers means cut costs and objectives compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import InvalidInput, Ranking, as_ranking


@dataclass(frozen=True, eq=False)
class CountTournament:
    n: int
    counts: np.ndarray
    elements: tuple[int, ...]
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "index", {v: i for i, v in enumerate(self.elements)})
        if c.shape != (len(self.elements), len(self.elements)):
            raise InvalidInput("count table does not match element list")

    @property
    def d(self) -> int:
        return len(self.elements)

    def count(self, a: int, b: int) -> int:
        """Number of rankings placing ``a`` before ``b``."""
        return int(self.counts[self.index[a], self.index[b]])

    def in_degrees(self) -> np.ndarray:
        """Weighted in-degree of every vertex, in ``elements`` order, times n."""
        return self.counts.sum(axis=0)


def _positions(rankings: Sequence[Sequence[int]], elements: Sequence[int]) -> np.ndarray:
    idx = {v: i for i, v in enumerate(elements)}
    m = len(elements)
    pos = np.empty((len(rankings), m), dtype=np.int64)
    for r, pi in enumerate(rankings):
        if len(pi) != m:
            raise InvalidInput("rankings over different universes")
        row = pos[r]
        seen = np.zeros(m, dtype=bool)
        for p, v in enumerate(pi):
            i = idx.get(v)
            if i is None or seen[i]:
                raise InvalidInput(f"ranking {tuple(pi)} is not over {tuple(elements)}")
            seen[i] = True
            row[i] = p
    return pos


def build_tournament(S, elements: Sequence[int] | None = None) -> CountTournament:
    """Count tournament of a ranking sequence.

    ``S`` may hold full rankings or sub-rankings over a shared element set;
    ``elements`` defaults to the sorted element set of the first ranking.
    """
    S = list(S)
    if not S:
        raise InvalidInput("cannot build a tournament from no rankings")
    first = S[0].order if isinstance(S[0], Ranking) else tuple(S[0])
    if elements is None:
        elements = tuple(sorted(first))
    S = [r.order if isinstance(r, Ranking) else tuple(r) for r in S]
    pos = _positions(S, elements)
    m = len(elements)
    counts = np.zeros((m, m), dtype=np.int64)
    # chunk to bound the n x m x m boolean temporary
    step = max(1, 4_000_000 // max(1, m * m))
    for lo in range(0, len(S), step):
        p = pos[lo:lo + step]
        counts += (p[:, :, None] < p[:, None, :]).sum(axis=0)
    return CountTournament(len(S), counts, tuple(elements))


def single_ranking_tournament(pi) -> CountTournament:
    pi = as_ranking(pi)
    pos = np.array(pi.pos[1:], dtype=np.int64)
    counts = (pos[:, None] < pos[None, :]).astype(np.int64)
    return CountTournament(1, counts, tuple(range(1, pi.d + 1)))


def weighted_in_degree(T: CountTournament, v: int) -> int:
    return int(T.counts[:, T.index[v]].sum())


@dataclass(frozen=True)
class Violation:
    kind: str  # "probability" or "triangle"
    vertices: tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.kind} violation at {self.vertices}: {self.detail}"


def validate(T: CountTournament) -> Violation | None:
    """Return the first violated constraint, or ``None`` if the table is valid.

    Checks n_ab + n_ba = n for every pair and n_ab <= n_ac + n_cb for every
    triple of distinct vertices.
    """
    c, n, el = T.counts, T.n, T.elements
    m = T.d
    if (np.diag(c) != 0).any():
        i = int(np.flatnonzero(np.diag(c))[0])
        return Violation("probability", (el[i], el[i]), "nonzero diagonal")
    if (c < 0).any():
        i, j = map(int, np.argwhere(c < 0)[0])
        return Violation("probability", (el[i], el[j]), "negative count")
    bad = (c + c.T != n)
    np.fill_diagonal(bad, False)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        return Violation(
            "probability", (el[i], el[j]),
            f"n_ab + n_ba = {c[i, j] + c[j, i]} != n = {n}",
        )
    for k in range(m):
        # slack[i, j] = c[i, k] + c[k, j] - c[i, j] must be >= 0
        slack = c[:, k][:, None] + c[k, :][None, :] - c
        slack[k, :] = 0
        slack[:, k] = 0
        np.fill_diagonal(slack, 0)
        if (slack < 0).any():
            i, j = map(int, np.argwhere(slack < 0)[0])
            return Violation(
                "triangle", (el[i], el[j], el[k]),
                f"n_ab = {c[i, j]} > n_ac + n_cb = {c[i, k] + c[k, j]}",
            )
    return None


@dataclass(frozen=True, eq=False)
class MajorityTournament:
    elements: tuple[int, ...]
    adj: np.ndarray  # adj[i, j] is True iff edge elements[i] -> elements[j]

    def __post_init__(self):
        a = np.asarray(self.adj, dtype=bool)
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)
        if np.diag(a).any() or not ((a ^ a.T) | np.eye(len(a), dtype=bool)).all():
            raise InvalidInput("not a tournament: need exactly one edge per pair")

    @property
    def d(self) -> int:
        return len(self.elements)

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adj[self.elements.index(a), self.elements.index(b)])


def majority_tournament(t1, t2, t3) -> MajorityTournament:
    """Edge a -> b iff at least two of the three rankings put a before b."""
    T = build_tournament([t1, t2, t3])
    return MajorityTournament(T.elements, T.counts >= 2)
