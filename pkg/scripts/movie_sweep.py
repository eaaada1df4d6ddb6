"""Budget or cardinality sweep on the movie diversity instance (synthetic rows unless --csv is given)."""

import argparse
import logging
from pathlib import Path

from sproutkit.bench import ExperimentConfig, budget_grid, format_summary, records_to_csv, run_experiment, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", help="movie CSV with columns id, rating, year, genres, f1..fd")
    ap.add_argument("--synthetic-n", type=int, default=300)
    ap.add_argument("--sweep", choices=("budget", "cardinality"), default="budget")
    ap.add_argument("--third-knapsack", action="store_true")
    ap.add_argument("--algorithms", nargs="+", default=["sproutpp", "greedy", "rp_greedy", "dssgs"])
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="movie_sweep.csv")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    instance = {"kind": "movies", "synthetic_n": args.synthetic_n, "third_knapsack": args.third_knapsack}
    if args.csv:
        instance["csv"] = args.csv
    values = budget_grid() if args.sweep == "budget" else list(range(4, 11))
    cfg = ExperimentConfig(instance=instance, algorithms=args.algorithms, sweep_kind=args.sweep,
                           sweep_values=values, repeats=args.repeats)
    records = run_experiment(cfg, jobs=args.jobs)
    Path(args.out).write_text(records_to_csv(records))
    print(format_summary(summarize(records)))


if __name__ == "__main__":
    main()
