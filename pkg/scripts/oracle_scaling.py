"""Oracle calls of SPROUT (C=1) against n, with a log-log slope fit."""

import argparse

import numpy as np

from sproutkit.bench import build_maxcut_instance, gen_er_graph
from sproutkit.sprout import SproutParams, sprout


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--p", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    calls = []
    for n in args.sizes:
        rec = sprout(build_maxcut_instance(gen_er_graph(n, args.p, args.seed)), SproutParams(), jobs=args.jobs)
        calls.append(rec.oracle_calls)
        print(f"n={n:>5} calls={rec.oracle_calls:>10} value={rec.value:.3f}")
    slope = np.polyfit(np.log(args.sizes), np.log(calls), 1)[0]
    print(f"log-log slope {slope:.3f}")


if __name__ == "__main__":
    main()
