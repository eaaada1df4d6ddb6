"""Comparators and the exhaustive optimum used as a test oracle."""

from __future__ import annotations

import dataclasses
import math
import time

from .core import Instance, ResultRecord, SizeError, sorted_ids
from .sprout import SproutParams, solve_seed

MAX_BRUTE_N = 24
MAX_BRUTE_SETS = 1 << 24


@dataclasses.dataclass
class BruteForceResult:
    opt_set: tuple
    opt_value: float
    sets_examined: int

    def to_dict(self) -> dict:
        return {"value": float(self.opt_value), "set": list(self.opt_set), "sets_examined": self.sets_examined}


def brute_force(inst: Instance, size_cap: int | None = None) -> BruteForceResult:
    """Exact optimum by depth-first search over feasible sets.

    Feasibility is downward closed, so only feasible sets are ever extended.
    Uses the objective directly; the instance's call counter is untouched.
    """
    n = inst.n
    cap = n if size_cap is None else min(size_cap, n)
    if size_cap is None and n > MAX_BRUTE_N:
        raise SizeError(f"n={n} exceeds {MAX_BRUTE_N}; pass size_cap to bound the search")
    if sum(math.comb(n, s) for s in range(cap + 1)) > MAX_BRUTE_SETS and n > MAX_BRUTE_N:
        raise SizeError(f"too many subsets to examine for n={n}, size_cap={size_cap}")

    obj = inst.objective
    pool = inst.feasible_singletons()
    best_set = ()
    best_value = obj.value(frozenset())
    examined = 1

    # stack entries: (set, value, next position in pool)
    stack = [(frozenset(), best_value, 0)]
    while stack:
        S, v, start = stack.pop()
        if len(S) >= cap:
            continue
        for pos in range(len(pool) - 1, start - 1, -1):
            e = pool[pos]
            T = S | {e}
            if not inst.is_feasible(T):
                continue
            examined += 1
            w = v + obj.gain(S, e)
            if w > best_value + 1e-12 or (abs(w - best_value) <= 1e-12 and len(T) < len(best_set)):
                best_set, best_value = tuple(sorted_ids(T)), w
            stack.append((T, w, pos + 1))
    return BruteForceResult(best_set, obj.value(frozenset(best_set)), examined)


def _greedy(inst: Instance, banned=frozenset()):
    oracle = inst.oracle
    pool = [e for e in inst.feasible_singletons() if e not in banned]
    S = frozenset()
    value = oracle.evaluate(S)
    while True:
        best_e, best_g = None, 0.0
        for e in pool:
            if e in S or not inst.is_feasible(S | {e}):
                continue
            g = oracle.gain(S, e)
            if g > best_g:
                best_e, best_g = e, g
        if best_e is None:
            return S, value
        S = S | {best_e}
        value += best_g


def greedy(inst: Instance) -> ResultRecord:
    """Add the feasible element of largest positive gain until none is left."""
    t0 = time.perf_counter()
    start = inst.oracle.call_count
    S, _ = _greedy(inst)
    return ResultRecord("greedy", tuple(sorted_ids(S)), inst.value(S), inst.oracle.call_count - start,
                        1000 * (time.perf_counter() - t0))


def repeated_greedy(inst: Instance, rounds: int = 2) -> ResultRecord:
    """Greedy on the ground set minus everything earlier rounds picked; best round wins."""
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    t0 = time.perf_counter()
    start = inst.oracle.call_count
    banned = frozenset()
    best, best_value = None, -math.inf
    for _ in range(rounds):
        S, _ = _greedy(inst, banned)
        v = inst.value(S)
        if v > best_value:
            best, best_value = S, v
        banned = banned | S
    return ResultRecord("rp_greedy", tuple(sorted_ids(best)), best_value, inst.oracle.call_count - start,
                        1000 * (time.perf_counter() - t0), extra={"rounds": rounds})


def density_search_sgs(inst: Instance, params: SproutParams, lazy: bool = True) -> ResultRecord:
    """The density search around KnapsackSGS with an empty seed and no gamma term."""
    t0 = time.perf_counter()
    start = inst.oracle.call_count
    out = solve_seed(inst, frozenset(), params, reduce=False, gamma_zero=True, lazy=lazy)
    return ResultRecord("dssgs", tuple(sorted_ids(out.solution)), out.value, inst.oracle.call_count - start,
                        1000 * (time.perf_counter() - t0), extra={"probes": len(out.probes)})
