"""Instance generators, exact fair-OPT oracles, analysis sets, and the
parameter-sweep experiment runner.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .aggregate import DP_CAP, AggregatorChoice, best_from_input, fair_aggregate, min_linear_ordering
from .bipartition import TooLarge, colorful_subsets
from .closest_fair import PERMUTATION_LIMIT, distances_to_all, fair_mask, permutations_array
from .core import (
    FairnessSpec, GroupedUniverse, InfeasibleSpec, Instance, InvalidInput, Ranking,
    as_ranking, check_feasible, is_fair, parse_rational,
)
from .formats import read_instance
from .generic import FastConfig, generic_fair_ra, generic_fair_ra_fast
from .tournament import build_tournament

OPT_BUDGET = 20_000_000


# -- tight family ---------------------------------------------------------

@dataclass(frozen=True)
class TightParams:
    s: int
    t: int

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise InvalidInput("tight family needs s >= 1 and t >= 1")

    @property
    def d(self) -> int:
        return 2 * self.s + 2 * self.t

    def blocks(self):
        """Candidate ids of A, B, C, D."""
        s, t = self.s, self.t
        A = list(range(1, s + 1))
        B = list(range(s + 1, 2 * s + 1))
        C = list(range(2 * s + 1, 2 * s + t + 1))
        D = list(range(2 * s + t + 1, 2 * s + 2 * t + 1))
        return A, B, C, D

    def optimal_ranking(self) -> Ranking:
        A, B, C, D = self.blocks()
        return Ranking(tuple(C + A + B + D))

    def pipeline_ranking(self) -> Ranking:
        """Output of the pipeline when it picks B u C as the top set."""
        A, B, C, D = self.blocks()
        return Ranking(tuple(C + B + A + D))


def gen_tight(p: TightParams) -> Instance:
    """Instance on which the two-stage pipeline can be forced to ratio near 2.

    d - 2s + 1 copies of (C, A, B, D), one (B, C, D, A), and for j = 1..s-1
    two copies of the ranking that lifts the last j members of B to the front
    and drops the first j members of A to the bottom.
    """
    A, B, C, D = p.blocks()
    s, d = p.s, p.d
    rankings = [tuple(C + A + B + D)] * (d - 2 * s + 1)
    rankings.append(tuple(B + C + D + A))
    for j in range(1, s):
        r = tuple(B[s - j:] + C + A[j:] + B[:s - j] + D + A[:j])
        rankings += [r, r]
    u = GroupedUniverse(tuple(2 if v <= 2 * s else 1 for v in range(1, d + 1)), 2)
    spec = FairnessSpec(
        (Fraction(p.t, s + p.t), Fraction(s, s + p.t)), (Fraction(1), Fraction(1)), d // 2
    )
    return Instance(u, spec, tuple(Ranking(r) for r in rankings))


def tight_closed_forms(p: TightParams) -> tuple[int, int]:
    """(objective of the optimal ranking, objective of the pipeline ranking)."""
    s, d = p.s, p.d
    star = d * s * s - s
    algo = Fraction(6 * d * s * s - 8 * s ** 3 - s, 3)
    assert algo.denominator == 1
    return star, int(algo)


# -- random instances -----------------------------------------------------

def round_robin_universe(d: int, g: int) -> GroupedUniverse:
    return GroupedUniverse(tuple((v - 1) % g + 1 for v in range(1, d + 1)), g)


def planted_rankings(center: Ranking, n: int, swaps: int, rng) -> list[Ranking]:
    out = []
    for _ in range(n):
        order = list(center.order)
        for _ in range(swaps if len(order) > 1 else 0):
            i = int(rng.integers(len(order) - 1))
            order[i], order[i + 1] = order[i + 1], order[i]
        out.append(Ranking(tuple(order)))
    return out


def gen_random(n: int, d: int, g: int, k: int, model: str = "uniform", seed=0,
               center=None, swaps: int = 0, spec: FairnessSpec | None = None) -> Instance:
    """Random instance; groups round-robin, alpha = beta = group proportions.

    ``model`` is ``"uniform"`` (i.i.d. uniform permutations) or ``"planted"``
    (``swaps`` random adjacent transpositions applied to ``center``, which
    defaults to a random permutation).
    """
    if n < 1 or d < 1 or not 1 <= g <= d or not 1 <= k <= d:
        raise InvalidInput(f"bad sizes n={n} d={d} g={g} k={k}")
    rng = np.random.default_rng(seed)
    u = round_robin_universe(d, g)
    spec = spec or FairnessSpec.proportional(u, k)
    if model == "uniform":
        rankings = [Ranking(tuple(int(v) for v in rng.permutation(d) + 1)) for _ in range(n)]
    elif model == "planted":
        if center is None:
            center = Ranking(tuple(int(v) for v in rng.permutation(d) + 1))
        rankings = planted_rankings(as_ranking(center), n, swaps, rng)
    else:
        raise InvalidInput(f"unknown model {model!r}")
    return Instance(u, spec, tuple(rankings))


_GRID = tuple(sorted({Fraction(a, b) for b in (1, 2, 3, 4, 5) for a in range(b + 1)}))


def random_feasible_spec(u: GroupedUniverse, k: int, rng, tries: int = 200) -> FairnessSpec:
    """Random (alpha, beta) from a small rational grid that admits a fair ranking."""
    for _ in range(tries):
        alphas, betas = [], []
        for _ in range(u.g):
            a, b = sorted(rng.choice(len(_GRID), size=2))
            alphas.append(_GRID[a])
            betas.append(_GRID[b])
        spec = FairnessSpec(tuple(alphas), tuple(betas), k)
        try:
            check_feasible(u, spec)
            return spec
        except InfeasibleSpec:
            continue
    return FairnessSpec.unconstrained(u.g, k)


def random_instance(rng, d_range=(2, 8), n_range=(1, 7), g_max: int = 3,
                    model: str | None = None) -> Instance:
    """Instance with random sizes, random groups and a random feasible spec."""
    d = int(rng.integers(d_range[0], d_range[1] + 1))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    g = int(rng.integers(1, min(g_max, d) + 1))
    k = int(rng.integers(1, d + 1))
    groups = [int(x) for x in rng.integers(1, g + 1, size=d)]
    u = GroupedUniverse(tuple(groups), g)
    spec = random_feasible_spec(u, k, rng)
    model = model or ("planted" if rng.random() < 0.5 else "uniform")
    if model == "planted":
        center = Ranking(tuple(int(v) for v in rng.permutation(d) + 1))
        rankings = planted_rankings(center, n, int(rng.integers(0, 2 * d + 1)), rng)
    else:
        rankings = [Ranking(tuple(int(v) for v in rng.permutation(d) + 1)) for _ in range(n)]
    return Instance(u, spec, tuple(rankings))


# -- exact oracles --------------------------------------------------------

def opt_work(d: int, k: int) -> int:
    return math.comb(d, k) * (1 << max(k, d - k))


def exact_fair_opt(inst: Instance, budget: int = OPT_BUDGET) -> tuple[Ranking, int]:
    """Optimal fair aggregate by enumerating colorful top sets.

    For a fixed top set L the objective splits into the crossing cost of L
    plus independent Kemeny problems inside L and inside its complement, each
    solved exactly. Ties resolve to the lexicographically first L.
    """
    d, k = inst.d, inst.spec.k
    if max(k, d - k) > DP_CAP or opt_work(d, k) > budget:
        raise TooLarge(f"fair OPT on d={d}, k={k} exceeds the enumeration budget")
    T = build_tournament(inst.rankings)
    c = T.counts
    best = None
    everyone = np.arange(d)
    for L in colorful_subsets(inst.universe, inst.spec):
        li = np.array(L, dtype=np.int64) - 1
        ri = np.setdiff1d(everyone, li)
        cross = int(c[np.ix_(ri, li)].sum())
        if best is not None and cross >= best[1]:
            continue
        top, top_cost = min_linear_ordering(c[np.ix_(li, li)])
        bot, bot_cost = min_linear_ordering(c[np.ix_(ri, ri)])
        total = cross + top_cost + bot_cost
        if best is None or total < best[1]:
            order = tuple(int(li[i]) + 1 for i in top) + tuple(int(ri[i]) + 1 for i in bot)
            best = (order, total)
    return Ranking(best[0]), best[1]


def exact_fair_opt_enum(inst: Instance) -> tuple[Ranking, int]:
    """Optimal fair aggregate by scanning every permutation (d <= 8)."""
    if inst.d > PERMUTATION_LIMIT:
        raise TooLarge(f"d={inst.d} exceeds permutation limit {PERMUTATION_LIMIT}")
    perms = permutations_array(inst.d)
    total = np.zeros(len(perms), dtype=np.int64)
    for pi in inst.rankings:
        total += distances_to_all(pi, perms)
    total[~fair_mask(perms, inst.universe, inst.spec)] = np.iinfo(np.int64).max
    i = int(np.argmin(total))
    return Ranking(tuple(int(v) for v in perms[i])), int(total[i])


# -- analysis sets --------------------------------------------------------

@dataclass(frozen=True)
class AnalysisContext:
    sigma_star: Ranking
    inversions: tuple[frozenset, ...]  # pairs (a, b): a above b in input i, below in sigma_star


def inversion_set(pi, sigma) -> frozenset:
    pi, sigma = as_ranking(pi), as_ranking(sigma)
    return frozenset(
        (a, b)
        for a, b in itertools.permutations(range(1, pi.d + 1), 2)
        if pi.before(a, b) and sigma.before(b, a)
    )


def build_analysis(inst: Instance, sigma_star) -> AnalysisContext:
    sigma_star = as_ranking(sigma_star)
    if sigma_star.d != inst.d:
        raise InvalidInput("reference ranking over a different universe")
    return AnalysisContext(sigma_star, tuple(inversion_set(p, sigma_star) for p in inst.rankings))


# -- experiments ----------------------------------------------------------

AXES = ("n", "d", "k", "alpha")
CSV_FIELDS = ("axis", "algorithm", "seed", "objective", "opt", "ratio", "wall_ms", "error")


def _run_pipeline(inst, seed):
    return fair_aggregate(inst, AggregatorChoice("kwiksort", seed))


def _run_pipeline_exact(inst, seed):
    return fair_aggregate(inst, AggregatorChoice("exact-dp", seed))


ALGORITHMS = {
    "pipeline": _run_pipeline,
    "pipeline-exact": _run_pipeline_exact,
    "best-from-input": lambda inst, seed: best_from_input(inst),
    "generic": lambda inst, seed: generic_fair_ra(inst, "auto", seed),
    "generic-fast": lambda inst, seed: generic_fair_ra_fast(inst, FastConfig(seed=seed)),
    "oracle": lambda inst, seed: exact_fair_opt(inst),
}


@dataclass
class ExperimentConfig:
    axis: str
    values: list
    algorithms: list[str]
    seeds: list[int] = field(default_factory=lambda: [0])
    base: dict = field(default_factory=dict)  # random-generator params, or {"path": ...}
    out: str | None = None  # output prefix; writes <out>.csv and <out>.json
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise InvalidInput(f"axis must be one of {AXES}")
        if not self.algorithms:
            raise InvalidInput("at least one algorithm is required")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise InvalidInput(f"unknown algorithm {a!r}")
        if not self.values:
            raise InvalidInput("no axis values")


@dataclass
class ResultRow:
    axis: object
    algorithm: str
    seed: int
    objective: int | None = None
    opt: int | None = None
    ratio: float | None = None
    wall_ms: float | None = None
    error: str = ""
    ranking: tuple[int, ...] | None = None

    def csv_record(self) -> dict:
        return {
            "axis": str(self.axis),
            "algorithm": self.algorithm,
            "seed": str(self.seed),
            "objective": "" if self.objective is None else str(self.objective),
            "opt": "" if self.opt is None else str(self.opt),
            "ratio": "" if self.ratio is None else repr(self.ratio),
            "wall_ms": "" if self.wall_ms is None else repr(self.wall_ms),
            "error": self.error,
        }

    def json_record(self) -> dict:
        return {
            "axis": self.axis, "algorithm": self.algorithm, "seed": self.seed,
            "objective": self.objective, "opt": self.opt, "ratio": self.ratio,
            "wall_ms": self.wall_ms, "error": self.error,
            "ranking": list(self.ranking) if self.ranking is not None else None,
        }


def base_instance(base: dict, seed: int) -> Instance:
    if "path" in base:
        return read_instance(base["path"])
    params = {"n": 10, "d": 8, "g": 2, "k": 4, "model": "uniform", "swaps": 0}
    params.update({k: v for k, v in base.items() if k in params})
    return gen_random(params["n"], params["d"], params["g"], params["k"],
                      params["model"], seed, swaps=params["swaps"])


def apply_axis(inst: Instance, axis: str, value) -> Instance:
    """Derive the instance for one sweep point from the base instance.

    ``n`` keeps the first n rankings; ``d`` keeps candidates 1..d and resets
    alpha = beta to the group proportions; ``k`` changes only the prefix
    length; ``alpha`` sets every alpha_i to value times the group proportion.
    """
    u, spec = inst.universe, inst.spec
    if axis == "n":
        n = int(value)
        if not 1 <= n <= inst.n:
            raise InvalidInput(f"n={n} outside 1..{inst.n}")
        return Instance(u, spec, inst.rankings[:n])
    if axis == "d":
        d = int(value)
        if not 1 <= d <= inst.d:
            raise InvalidInput(f"d={d} outside 1..{inst.d}")
        keep = set(range(1, d + 1))
        sub = GroupedUniverse(u.group_of[:d], u.g)
        rankings = tuple(Ranking(tuple(v for v in p.order if v in keep)) for p in inst.rankings)
        return Instance(sub, FairnessSpec.proportional(sub, min(spec.k, d)), rankings)
    if axis == "k":
        return Instance(u, FairnessSpec(spec.alphas, spec.betas, int(value)), inst.rankings)
    if axis == "alpha":
        v = parse_rational(str(value))
        props = [Fraction(s, u.d) for s in u.sizes()]
        return Instance(u, FairnessSpec(tuple(v * p for p in props), spec.betas, spec.k),
                        inst.rankings)
    raise InvalidInput(f"unknown axis {axis!r}")


def _oracle_feasible(inst: Instance) -> bool:
    d, k = inst.d, inst.spec.k
    return max(k, d - k) <= DP_CAP and opt_work(d, k) <= OPT_BUDGET


def run_point(cfg: ExperimentConfig, value, seed: int) -> list[ResultRow]:
    try:
        inst = apply_axis(base_instance(cfg.base, seed), cfg.axis, value)
    except (InvalidInput, InfeasibleSpec, OSError) as exc:
        return [ResultRow(value, a, seed, error=f"{type(exc).__name__}: {exc}") for a in cfg.algorithms]
    opt = exact_fair_opt(inst)[1] if _oracle_feasible(inst) else None
    rows = []
    for name in cfg.algorithms:
        row = ResultRow(value, name, seed, opt=opt)
        start = time.perf_counter()
        try:
            sigma, obj = ALGORITHMS[name](inst, seed)
        except Exception as exc:  # recorded per row, the sweep carries on
            row.error = f"{type(exc).__name__}: {exc}"
        else:
            row.objective, row.ranking = obj, sigma.order
            if not is_fair(sigma, inst.universe, inst.spec):
                row.error = "output is not fair"
            if opt is not None:
                row.ratio = obj / opt if opt else (1.0 if obj == 0 else math.inf)
        if cfg.timing:
            row.wall_ms = round((time.perf_counter() - start) * 1000, 3)
        rows.append(row)
    return rows


def _run_point_args(args):
    return run_point(*args)


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Run every (axis value, seed) point; rows come back in config order."""
    points = [(cfg, v, s) for v in cfg.values for s in cfg.seeds]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            chunks = list(ex.map(_run_point_args, points))
    else:
        chunks = [run_point(*p) for p in points]
    rows = [r for chunk in chunks for r in chunk]
    if cfg.out:
        write_results(rows, cfg.out)
    return rows


def results_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.csv_record())
    return buf.getvalue()


def results_json(rows) -> str:
    return json.dumps([r.json_record() for r in rows], indent=2) + "\n"


def write_results(rows, prefix) -> tuple[Path, Path]:
    prefix = Path(prefix)
    if prefix.suffix in (".csv", ".json"):
        prefix = prefix.with_suffix("")
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = prefix.with_suffix(".csv"), prefix.with_suffix(".json")
    csv_path.write_text(results_csv(rows))
    json_path.write_text(results_json(rows))
    return csv_path, json_path


def read_results_csv(text: str) -> list[dict]:
    """Parse a results CSV back into typed values (blank cells become None)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append({
            "axis": rec["axis"],
            "algorithm": rec["algorithm"],
            "seed": int(rec["seed"]),
            "objective": int(rec["objective"]) if rec["objective"] else None,
            "opt": int(rec["opt"]) if rec["opt"] else None,
            "ratio": float(rec["ratio"]) if rec["ratio"] else None,
            "wall_ms": float(rec["wall_ms"]) if rec["wall_ms"] else None,
            "error": rec["error"],
        })
    return out
