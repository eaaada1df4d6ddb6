"""Objective and oracle calls of SPROUT and SPROUT++ on seeded ER max-cut instances."""

import argparse
import statistics

from sproutkit.bench import build_maxcut_instance, gen_er_graph
from sproutkit.sprout import SproutParams, sprout
from sproutkit.sproutpp import SproutPPParams, sproutpp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--p", type=float, default=0.01)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    print(f"{'graph':>5} {'sprout':>9} {'calls':>9} {'pp_med':>9} {'pp_calls':>9} {'value':>6} {'calls':>6}")
    for s in range(args.instances):
        g = gen_er_graph(args.n, args.p, 100 + s)
        ref = sprout(build_maxcut_instance(g), SproutParams(), jobs=args.jobs)
        runs = [sproutpp(build_maxcut_instance(g), SproutPPParams(seed=r), jobs=args.jobs)
                for r in range(args.repeats)]
        v = statistics.median(r.value for r in runs)
        c = statistics.median(r.oracle_calls for r in runs)
        print(f"{100 + s:>5} {ref.value:>9.3f} {ref.oracle_calls:>9} {v:>9.3f} {c:>9.0f} "
              f"{v / ref.value:>6.3f} {c / ref.oracle_calls:>6.3f}")


if __name__ == "__main__":
    main()
