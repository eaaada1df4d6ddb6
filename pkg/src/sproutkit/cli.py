"""Command-line front end: run, bench, brute, gen."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from .baselines import brute_force, density_search_sgs, greedy, repeated_greedy
from .bench import (
    ConfigError,
    ExperimentConfig,
    build_maxcut_instance,
    build_movie_instance,
    format_summary,
    gen_er_graph,
    records_to_csv,
    run_experiment,
    summarize,
    synthetic_movies,
)
from .core import EmptyInstanceError, Instance, ParamError, SizeError, SproutError
from .io import InstanceFormatError, instance_to_dict, load_instance, save_instance, write_movies
from .objectives import SpecError, graph_text
from .sprout import SproutParams, sprout
from .sproutpp import SproutPPParams, sproutpp

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_REFUSED = 0, 2, 3, 4
ALGOS = ("sprout", "sproutpp", "greedy", "rp_greedy", "dssgs")

log = logging.getLogger("sproutkit")


def bundled(name: str) -> Path:
    return Path(str(resources.files("sproutkit") / "data" / name))


def resolve_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for cand in (name, f"{name}.json"):
        b = bundled(cand)
        if b.exists():
            return b
    raise FileNotFoundError(f"no such file or bundled instance: {name}")


def default_seed() -> int:
    env = os.environ.get("SUBMOD_SEED")
    return int(env) if env not in (None, "") else 0


def emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def sprout_params(args, inst: Instance) -> SproutParams:
    eps = args.eps if args.eps is not None else 0.25
    if inst.m >= 1:
        base = SproutParams.theory(inst.k, inst.m, eps=eps, c_enum=args.c_enum or 1, delta=args.delta)
    else:
        base = SproutParams(c_enum=args.c_enum or 1, eps=eps, delta=args.delta or eps)
    over = {k: getattr(args, k) for k in ("ell", "beta", "gamma") if getattr(args, k) is not None}
    return dataclasses.replace(base, **over)


def sproutpp_params(args) -> SproutPPParams:
    over = {k: getattr(args, k) for k in ("alpha", "mu", "ell", "delta", "eps", "beta", "gamma")
            if getattr(args, k) is not None}
    if args.eps is not None and args.delta is None:
        over["delta"] = args.eps
    return SproutPPParams(t_counter=args.tc, seed=args.seed, **over)


def cmd_run(args) -> int:
    inst = load_instance(resolve_path(args.instance))
    if not inst.feasible_singletons():
        raise EmptyInstanceError("instance has no feasible single element")
    if args.algo == "sprout":
        rec = sprout(inst, sprout_params(args, inst), jobs=args.jobs)
    elif args.algo == "dssgs":
        rec = density_search_sgs(inst, sprout_params(args, inst))
    elif args.algo == "sproutpp":
        rec = sproutpp(inst, sproutpp_params(args), jobs=args.jobs)
    elif args.algo == "greedy":
        rec = greedy(inst)
    else:
        rec = repeated_greedy(inst, args.rounds or args.ell or 2)
    if args.pretty:
        print(f"{rec.algo}: value={rec.value:.6g} |S|={len(rec.solution)} calls={rec.oracle_calls} "
              f"set={list(rec.solution)}")
    else:
        emit(rec.to_dict(timing=args.timing))
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = ExperimentConfig.load(resolve_path(args.config))
    if args.repeats is not None:
        cfg.repeats = args.repeats
    if args.seed is not None:
        cfg.seed = args.seed
    records = run_experiment(cfg, jobs=args.jobs)
    text = records_to_csv(records, timing=args.timing)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    rows = summarize(records)
    if args.pretty:
        print(format_summary(rows), file=sys.stderr if args.out == "-" else sys.stdout)
    elif args.out != "-":
        for value, algo, mean, std, count in rows:
            emit({"sweep_value": value, "algo": algo, "mean": mean, "std": std, "count": count})
    return EXIT_OK


def cmd_brute(args) -> int:
    inst = load_instance(resolve_path(args.instance))
    res = brute_force(inst, args.size_cap)
    if args.pretty:
        print(f"OPT={res.opt_value:.6g} set={list(res.opt_set)} examined={res.sets_examined}")
    else:
        emit(res.to_dict())
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "er":
        g = gen_er_graph(args.n, args.p, args.seed)
        if args.format == "graph":
            if args.out == "-":
                sys.stdout.write(graph_text(g))
            else:
                Path(args.out).write_text(graph_text(g))
            return EXIT_OK
        inst = build_maxcut_instance(g, args.cap, args.degree_budget, args.digit_budget)
    else:
        rows = synthetic_movies(args.n, args.dim, args.seed)
        if args.format == "csv":
            if args.out == "-":
                raise ParamError("csv output needs --out")
            write_movies(rows, args.out)
            return EXIT_OK
        inst = build_movie_instance(rows, use_third_knapsack=args.third_knapsack)
    if args.out == "-":
        sys.stdout.write(json.dumps(instance_to_dict(inst), indent=1) + "\n")
    else:
        save_instance(inst, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timing", action="store_true", help="report wall-clock times (breaks byte-reproducibility)")

    algo = argparse.ArgumentParser(add_help=False)
    for flag, typ in (("--eps", float), ("--delta", float), ("--ell", int), ("--beta", float), ("--gamma", float),
                      ("--c-enum", int), ("--tc", int), ("--alpha", float), ("--mu", float), ("--rounds", int)):
        algo.add_argument(flag, type=typ, default=None)

    p = argparse.ArgumentParser(prog="sproutkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common, algo], help="run one algorithm on an instance")
    r.add_argument("--instance", required=True)
    r.add_argument("--algo", required=True, choices=ALGOS)
    r.add_argument("--seed", type=int, default=None)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", parents=[common], help="run a sweep from a JSON config")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True, help="result CSV path, or - for stdout")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--repeats", type=int, default=None)
    b.set_defaults(func=cmd_bench)

    br = sub.add_parser("brute", parents=[common], help="exhaustive optimum of a small instance")
    br.add_argument("--instance", required=True)
    br.add_argument("--size-cap", type=int, default=None)
    br.set_defaults(func=cmd_brute)

    g = sub.add_parser("gen", parents=[common], help="generate an instance")
    g.add_argument("kind", choices=("er", "synthetic-movies"))
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--p", type=float, default=0.01)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default="-")
    g.add_argument("--format", choices=("instance", "graph", "csv"), default="instance")
    g.add_argument("--cap", type=int, default=10)
    g.add_argument("--degree-budget", type=float, default=100.0)
    g.add_argument("--digit-budget", type=float, default=40.0)
    g.add_argument("--dim", type=int, default=8)
    g.add_argument("--third-knapsack", action="store_true")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "seed", None) is None and args.command != "bench":
        args.seed = default_seed()
    if args.command == "gen":
        if args.n is None:
            args.n = 1000 if args.kind == "er" else 300
        allowed = ("instance", "graph") if args.kind == "er" else ("instance", "csv")
        if args.format not in allowed:
            parser.error(f"--format {args.format} does not apply to {args.kind}")
    try:
        return args.func(args)
    except EmptyInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InstanceFormatError, ConfigError, ParamError, SpecError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SproutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
