"""Budget sweep on an ER max-cut instance: SPROUT++ against the greedy comparators."""

import argparse
import json
import logging
from pathlib import Path

from sproutkit.bench import ExperimentConfig, format_summary, records_to_csv, run_experiment, summarize
from sproutkit.cli import bundled


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(bundled("maxcut-desk.json")))
    ap.add_argument("--n", type=int, help="override the graph size")
    ap.add_argument("--p", type=float, help="override the edge probability")
    ap.add_argument("--repeats", type=int)
    ap.add_argument("--with-sprout", action="store_true", help="also run SPROUT (slow beyond n=200)")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="maxcut_sweep.csv")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = ExperimentConfig.from_dict(json.loads(Path(args.config).read_text()))
    if args.n:
        cfg.instance["n"] = args.n
    if args.p:
        cfg.instance["p"] = args.p
    if args.repeats:
        cfg.repeats = args.repeats
    if args.with_sprout:
        cfg.algorithms.append("sprout")
    records = run_experiment(cfg, jobs=args.jobs)
    Path(args.out).write_text(records_to_csv(records))
    print(format_summary(summarize(records)))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
