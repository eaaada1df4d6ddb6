"""SPROUT++ value and oracle calls as the sampling counter t_c varies."""

import argparse
import math
import statistics

from sproutkit.bench import build_maxcut_instance, gen_er_graph
from sproutkit.sproutpp import SproutPPParams, sproutpp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--ratios", type=float, nargs="+", default=[0.02, 0.05, 0.1, 0.2, 0.4])
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--repeats", type=int, default=10)
    args = ap.parse_args()

    g = gen_er_graph(args.n, args.p, 0)
    print(f"{'t_c':>5} {'mean':>9} {'std':>8} {'calls':>10}")
    for ratio in args.ratios:
        t_c = max(1, math.ceil(ratio * args.n))
        runs = [sproutpp(build_maxcut_instance(g), SproutPPParams(t_counter=t_c, alpha=args.alpha, seed=r))
                for r in range(args.repeats)]
        vals = [r.value for r in runs]
        print(f"{t_c:>5} {statistics.fmean(vals):>9.3f} {statistics.pstdev(vals):>8.3f} "
              f"{statistics.fmean(r.oracle_calls for r in runs):>10.0f}")


if __name__ == "__main__":
    main()
