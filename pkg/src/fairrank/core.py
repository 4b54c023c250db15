"""Rankings, the Kendall tau distance, fairness constraints and objectives.

Candidates are the dense integers ``1..d``; groups are ``1..g``. A ranking
lists candidates top first. Sub-rankings (the result of :func:`restrict`) are
plain tuples over a subset of the universe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import math


class InvalidInput(ValueError):
    """Malformed rankings, ids, or mismatched dimensions."""


class InfeasibleSpec(ValueError):
    """No ranking can satisfy the fairness constraints."""


@dataclass(frozen=True)
class Ranking:
    order: tuple[int, ...]
    pos: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        d = len(order)
        pos = [-1] * (d + 1)
        for i, v in enumerate(order):
            if not 1 <= v <= d or pos[v] != -1:
                raise InvalidInput(f"not a permutation of 1..{d}: {order}")
            pos[v] = i
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "pos", tuple(pos))

    @property
    def d(self) -> int:
        return len(self.order)

    def position(self, v: int) -> int:
        """0-based position of candidate ``v``."""
        return self.pos[v]

    def before(self, a: int, b: int) -> bool:
        return self.pos[a] < self.pos[b]

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def __str__(self):
        return " ".join(map(str, self.order))

    @classmethod
    def parse(cls, line: str) -> "Ranking":
        try:
            return cls(tuple(int(tok) for tok in line.split()))
        except ValueError as exc:
            raise InvalidInput(str(exc)) from exc


def as_ranking(r) -> Ranking:
    return r if isinstance(r, Ranking) else Ranking(tuple(r))


@dataclass(frozen=True)
class GroupedUniverse:
    group_of: tuple[int, ...]  # group_of[v - 1] is the group of candidate v
    g: int

    def __post_init__(self):
        gof = tuple(int(x) for x in self.group_of)
        object.__setattr__(self, "group_of", gof)
        if self.g < 1:
            raise InvalidInput("need at least one group")
        for x in gof:
            if not 1 <= x <= self.g:
                raise InvalidInput(f"group id {x} outside 1..{self.g}")

    @property
    def d(self) -> int:
        return len(self.group_of)

    def group(self, v: int) -> int:
        return self.group_of[v - 1]

    def members(self, i: int) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.d + 1) if self.group_of[v - 1] == i)

    def sizes(self) -> list[int]:
        out = [0] * self.g
        for x in self.group_of:
            out[x - 1] += 1
        return out


def parse_rational(x) -> Fraction:
    """Parse ``0.25``, ``"1/4"`` or ``"0.25"`` into an exact fraction.

    Floats go through their decimal repr so ``0.1`` means one tenth.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        x = repr(x)
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad rational {x!r}") from exc


def floor_mul(q: Fraction, k: int) -> int:
    return math.floor(q * k)


def ceil_mul(q: Fraction, k: int) -> int:
    return math.ceil(q * k)


@dataclass(frozen=True)
class FairnessSpec:
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    k: int

    def __post_init__(self):
        a = tuple(parse_rational(x) for x in self.alphas)
        b = tuple(parse_rational(x) for x in self.betas)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)
        if len(a) != len(b):
            raise InvalidInput("alphas and betas differ in length")
        for ai, bi in zip(a, b):
            if not 0 <= ai <= bi <= 1:
                raise InvalidInput(f"need 0 <= alpha <= beta <= 1, got {ai}, {bi}")
        if self.k < 1:
            raise InvalidInput("k must be positive")

    @property
    def g(self) -> int:
        return len(self.alphas)

    def lower(self, i: int) -> int:
        """Minimum number of group-``i`` members in the top-k."""
        return floor_mul(self.alphas[i - 1], self.k)

    def upper(self, i: int) -> int:
        return ceil_mul(self.betas[i - 1], self.k)

    @classmethod
    def unconstrained(cls, g: int, k: int) -> "FairnessSpec":
        return cls((Fraction(0),) * g, (Fraction(1),) * g, k)

    @classmethod
    def proportional(cls, u: GroupedUniverse, k: int) -> "FairnessSpec":
        props = tuple(Fraction(s, u.d) for s in u.sizes())
        return cls(props, props, k)


def check_feasible(u: GroupedUniverse, spec: FairnessSpec) -> None:
    """Raise :class:`InfeasibleSpec` unless some ranking of ``u`` is fair."""
    if spec.g != u.g:
        raise InvalidInput(f"spec has {spec.g} groups, universe has {u.g}")
    if spec.k > u.d:
        raise InfeasibleSpec(f"k={spec.k} exceeds d={u.d}")
    sizes = u.sizes()
    lows = [spec.lower(i) for i in range(1, u.g + 1)]
    for i, (lo, sz) in enumerate(zip(lows, sizes), start=1):
        if lo > sz:
            raise InfeasibleSpec(f"group {i} needs {lo} in top-{spec.k} but has {sz} members")
    if sum(lows) > spec.k:
        raise InfeasibleSpec(f"lower bounds sum to {sum(lows)} > k={spec.k}")
    cap = sum(min(spec.upper(i), sizes[i - 1]) for i in range(1, u.g + 1))
    if cap < spec.k:
        raise InfeasibleSpec(f"upper bounds admit only {cap} < k={spec.k} candidates")


@dataclass(frozen=True)
class Instance:
    universe: GroupedUniverse
    spec: FairnessSpec
    rankings: tuple[Ranking, ...]

    def __post_init__(self):
        rs = tuple(as_ranking(r) for r in self.rankings)
        object.__setattr__(self, "rankings", rs)
        if not rs:
            raise InvalidInput("an instance needs at least one ranking")
        for r in rs:
            if r.d != self.universe.d:
                raise InvalidInput(f"ranking over {r.d} candidates, universe has {self.universe.d}")
        check_feasible(self.universe, self.spec)

    @property
    def d(self) -> int:
        return self.universe.d

    @property
    def n(self) -> int:
        return len(self.rankings)


@dataclass(frozen=True)
class WeightedRankingSet:
    items: tuple[tuple[Ranking, Fraction], ...]

    def __post_init__(self):
        items = tuple((as_ranking(r), parse_rational(w)) for r, w in self.items)
        object.__setattr__(self, "items", items)
        if items:
            d = items[0][0].d
            for r, w in items:
                if w <= 0:
                    raise InvalidInput("coreset weights must be positive")
                if r.d != d:
                    raise InvalidInput("weighted rankings over different universes")

    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.items), Fraction(0))

    def __len__(self):
        return len(self.items)


# -- Kendall tau ----------------------------------------------------------

def count_inversions(seq: Sequence[int]) -> int:
    """Number of pairs i < j with seq[i] > seq[j], by bottom-up merge sort."""
    a = list(seq)
    n = len(a)
    buf = [0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, t = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    buf[t] = a[j]
                    inv += mid - i
                    j += 1
                else:
                    buf[t] = a[i]
                    i += 1
                t += 1
            buf[t:t + mid - i] = a[i:mid]
            t += mid - i
            buf[t:t + hi - j] = a[j:hi]
        a, buf = buf, a
        width *= 2
    return inv


def _check_same_d(a: Ranking, b: Ranking) -> None:
    if a.d != b.d:
        raise InvalidInput(f"rankings over {a.d} and {b.d} candidates")


def kendall_tau(a, b) -> int:
    """Number of candidate pairs ordered differently by ``a`` and ``b``."""
    a, b = as_ranking(a), as_ranking(b)
    _check_same_d(a, b)
    return count_inversions([a.pos[v] for v in b.order])


def kendall_tau_naive(a, b) -> int:
    a, b = as_ranking(a), as_ranking(b)
    _check_same_d(a, b)
    d = a.d
    return sum(
        1
        for x in range(1, d + 1)
        for y in range(x + 1, d + 1)
        if a.before(x, y) != b.before(x, y)
    )


def _check_ids(xs: Iterable[int], d: int) -> frozenset[int]:
    s = frozenset(xs)
    for v in s:
        if not 1 <= v <= d:
            raise InvalidInput(f"candidate {v} outside 1..{d}")
    return s


def kendall_tau_blocks(a, b, X, Y) -> int:
    """Disagreeing pairs with one end in ``X`` and the other in ``Y``.

    An unordered pair is counted once if it lies in X x Y or Y x X.
    """
    a, b = as_ranking(a), as_ranking(b)
    _check_same_d(a, b)
    X, Y = _check_ids(X, a.d), _check_ids(Y, a.d)
    seen = 0
    for x in X:
        for y in Y:
            if x == y:
                continue
            if (y in X and x in Y) and y < x:
                continue  # pair inside X∩Y, count it from one side only
            if a.before(x, y) != b.before(x, y):
                seen += 1
    return seen


def objective(S, sigma) -> int:
    """Sum of Kendall tau distances from ``sigma`` to every ranking of ``S``."""
    rankings = S.rankings if isinstance(S, Instance) else S
    sigma = as_ranking(sigma)
    return sum(kendall_tau(p, sigma) for p in rankings)


def weighted_objective(P: WeightedRankingSet, sigma) -> Fraction:
    sigma = as_ranking(sigma)
    return sum((w * kendall_tau(r, sigma) for r, w in P.items), Fraction(0))


def block_objective(S, sigma, X, Y) -> int:
    rankings = S.rankings if isinstance(S, Instance) else S
    return sum(kendall_tau_blocks(p, sigma, X, Y) for p in rankings)


# -- restriction and concatenation ------------------------------------------

def restrict(pi, I) -> tuple[int, ...]:
    pi = as_ranking(pi)
    I = _check_ids(I, pi.d)
    return tuple(v for v in pi.order if v in I)


def concat(top: Sequence[int], bottom: Sequence[int]) -> Ranking:
    order = tuple(top) + tuple(bottom)
    if set(top) & set(bottom):
        raise InvalidInput("concatenated blocks overlap")
    return Ranking(order)


# -- fairness -----------------------------------------------------------------

def top_k_group_counts(pi, u: GroupedUniverse, k: int) -> list[int]:
    pi = as_ranking(pi)
    counts = [0] * u.g
    for v in pi.order[:k]:
        counts[u.group(v) - 1] += 1
    return counts


def is_fair(pi, u: GroupedUniverse, spec: FairnessSpec) -> bool:
    counts = top_k_group_counts(pi, u, spec.k)
    return all(
        spec.lower(i) <= counts[i - 1] <= spec.upper(i) for i in range(1, u.g + 1)
    )
