"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 I/O error, 4 enumeration budget
exceeded, 5 infeasible fairness constraints.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .aggregate import AggregatorChoice, best_from_input, fair_aggregate
from .bipartition import TooLarge
from .core import InfeasibleSpec, InvalidInput, kendall_tau
from .formats import format_instance, read_instance, read_ranking
from .generic import FastConfig, generic_fair_ra, generic_fair_ra_fast
from .harness import (
    ALGORITHMS, AXES, ExperimentConfig, TightParams, exact_fair_opt, gen_random,
    gen_tight, results_csv, run_experiment,
)

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 2, 3, 4, 5


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.family == "tight":
        p = TightParams(args.s, args.t)
        inst = gen_tight(p)
        comment = f"tight family s={p.s} t={p.t}"
    else:
        inst = gen_random(args.n, args.d, args.g, args.k, args.model, args.seed, swaps=args.swaps)
        comment = f"random n={args.n} d={args.d} g={args.g} k={args.k} model={args.model} seed={args.seed}"
    _emit(format_instance(inst, comment), args.out)
    return EXIT_OK


def run_algorithm(name: str, inst, inner: str = "kwiksort", seed: int = 0):
    if name == "pipeline":
        kind = "exact-dp" if inner == "exact" else "kwiksort"
        return fair_aggregate(inst, AggregatorChoice(kind, seed))
    if name == "best-from-input":
        return best_from_input(inst)
    if name == "generic":
        return generic_fair_ra(inst, "auto", seed)
    if name == "generic-fast":
        return generic_fair_ra_fast(inst, FastConfig(seed=seed))
    if name == "oracle":
        return exact_fair_opt(inst)
    raise InvalidInput(f"unknown algorithm {name!r}")


def cmd_agg(args) -> int:
    inst = read_instance(args.instance)
    start = time.perf_counter()
    sigma, obj = run_algorithm(args.algo, inst, args.inner, args.seed)
    wall = round((time.perf_counter() - start) * 1000, 3) if args.timing else None
    name = f"pipeline-{args.inner}" if args.algo == "pipeline" else args.algo
    if args.json:
        rec = {"algorithm": name, "objective": obj, "ranking": list(sigma.order), "wall_ms": wall}
        print(json.dumps(rec))
    else:
        print(f"algorithm: {name}")
        print(f"objective: {obj}")
        print(f"ranking: {sigma}")
        print(f"wall_ms: {'' if wall is None else wall}")
    return EXIT_OK


def cmd_dist(args) -> int:
    a, b = read_ranking(args.file_a), read_ranking(args.file_b)
    print(kendall_tau(a, b))
    return EXIT_OK


def _bench_config(args) -> ExperimentConfig:
    if args.config:
        raw = json.loads(Path(args.config).read_text())
    else:
        raw = {}
    if args.axis is not None:
        raw["axis"] = args.axis
    if args.values is not None:
        raw["values"] = args.values
    if args.algos is not None:
        raw["algorithms"] = args.algos
    if args.seeds is not None:
        raw["seeds"] = args.seeds
    if args.instance:
        raw["base"] = {"path": args.instance}
    else:
        base = raw.setdefault("base", {})
        for key in ("n", "d", "g", "k", "model", "swaps"):
            val = getattr(args, key)
            if val is not None:
                base[key] = val
    if args.out is not None:
        raw["out"] = args.out
    if args.workers is not None:
        raw["workers"] = args.workers
    if args.timing:
        raw["timing"] = True
    if "axis" not in raw or "values" not in raw:
        raise InvalidInput("bench needs an axis and its values")
    raw.setdefault("algorithms", [])
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise InvalidInput(f"bad bench config: {exc}") from exc


def cmd_bench(args) -> int:
    cfg = _bench_config(args)
    rows = run_experiment(cfg)
    if not cfg.out:
        sys.stdout.write(results_csv(rows))
    else:
        failed = sum(1 for r in rows if r.error)
        print(f"wrote {len(rows)} rows to {cfg.out}.csv/.json ({failed} with errors)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fairrank", description="Fair rank aggregation under Kendall tau.")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write an instance file")
    gen.add_argument("family", choices=["tight", "random"])
    gen.add_argument("--s", type=int, default=1, help="tight: size of A and B")
    gen.add_argument("--t", type=int, default=1, help="tight: size of C and D")
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--d", type=int, default=8)
    gen.add_argument("--g", type=int, default=2)
    gen.add_argument("--k", type=int, default=4)
    gen.add_argument("--model", choices=["uniform", "planted"], default="uniform")
    gen.add_argument("--swaps", type=int, default=0, help="planted: adjacent swaps per ranking")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", help="output path (default: stdout)")
    gen.set_defaults(func=cmd_gen)

    agg = sub.add_parser("agg", help="aggregate an instance file")
    agg.add_argument("instance")
    agg.add_argument("--algo", default="pipeline",
                     choices=["pipeline", "best-from-input", "generic", "generic-fast", "oracle"])
    agg.add_argument("--inner", choices=["kwiksort", "exact"], default="kwiksort")
    agg.add_argument("--seed", type=int, default=0)
    agg.add_argument("--json", action="store_true")
    agg.add_argument("--timing", action="store_true", help="report wall time (breaks byte-identical reruns)")
    agg.set_defaults(func=cmd_agg)

    dist = sub.add_parser("dist", help="Kendall tau distance between two ranking files")
    dist.add_argument("file_a")
    dist.add_argument("file_b")
    dist.set_defaults(func=cmd_dist)

    bench = sub.add_parser("bench", help="parameter sweep writing CSV and JSON")
    bench.add_argument("--config", help="JSON file with ExperimentConfig fields")
    bench.add_argument("--axis", choices=AXES)
    bench.add_argument("--values", nargs="+")
    bench.add_argument("--algos", nargs="*", choices=sorted(ALGORITHMS))
    bench.add_argument("--seeds", nargs="+", type=int)
    bench.add_argument("--instance", help="base instance file (default: random generator)")
    for key in ("n", "d", "g", "k", "swaps"):
        bench.add_argument(f"--{key}", type=int)
    bench.add_argument("--model", choices=["uniform", "planted"])
    bench.add_argument("--workers", type=int)
    bench.add_argument("--timing", action="store_true")
    bench.add_argument("--out", help="output prefix for <out>.csv and <out>.json")
    bench.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleSpec as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
