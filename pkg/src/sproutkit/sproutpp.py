"""SPROUT++: random singleton seeds behind a value filter, with a smoothed search."""

from __future__ import annotations

import dataclasses
import math
import time

import numpy as np

from .core import EmptyInstanceError, Instance, ParamError, ResultRecord, sorted_ids
from .sprout import SproutParams, map_seeds, pick_best, smooth_update  # noqa: F401  (smooth_update re-exported)


@dataclasses.dataclass(frozen=True)
class SproutPPParams:
    t_counter: int | None = None  # None -> ceil(n / 5)
    alpha: float = 0.5
    mu: float = 1.0
    ell: int = 2
    delta: float = 0.25
    eps: float = 0.25
    beta: float = 5e-4
    gamma: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.t_counter is not None and self.t_counter < 1:
            raise ParamError("t_counter must be at least 1")
        if not 0 <= self.alpha < 1:
            raise ParamError("alpha must lie in [0, 1)")
        if self.mu < 1:
            raise ParamError("mu must be at least 1")
        # validates the shared fields
        self.search_params()

    def search_params(self) -> SproutParams:
        return SproutParams(c_enum=1, ell=self.ell, delta=self.delta, eps=self.eps,
                            beta=self.beta, gamma=self.gamma)

    def counter_for(self, n: int) -> int:
        return self.t_counter if self.t_counter is not None else max(1, math.ceil(n / 5))


def best_single(inst: Instance, values: dict | None = None) -> tuple[int, float]:
    """Feasible singleton of largest value; ties go to the smallest id."""
    pool = inst.feasible_singletons()
    if not pool:
        raise EmptyInstanceError("no feasible single element")
    if values is None:
        values = {e: inst.oracle.evaluate((e,)) for e in pool}
    best = pool[0]
    for e in pool[1:]:
        if values[e] > values[best]:
            best = e
    return best, values[best]


def alpha_bound(p: int, m: int, eps: float) -> float:
    """Largest acceleration parameter for which the guarantee still holds."""
    return (1 - eps) * (p + 1 - (1 - eps) ** 2) / (eps * (p + 1) + m * (1 - eps))


def success_probability(r: int, n: int, t_c: int) -> float:
    """Lower bound on P(some counted seed lies inside the optimum)."""
    return 1.0 - math.exp(-r * t_c / n)


def sample_order(pool, seed: int) -> list[int]:
    """Without-replacement visiting order of the feasible singletons.

    Philox is counter based, so the order depends on the seed alone.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    return [int(e) for e in rng.permutation(np.asarray(pool, dtype=np.int64))]


def draw_seeds(pool, values: dict, threshold: float, t_c: int, seed: int):
    """Visit singletons in random order; keep the first t_c that pass the filter.

    Returns (counted seeds, number visited).  Stops early when the pool runs out.
    """
    counted = []
    visited = 0
    for e in sample_order(pool, seed):
        if len(counted) >= t_c:
            break
        visited += 1
        if values[e] >= threshold:
            counted.append(e)
    return counted, visited


def assumption_violations(inst: Instance, opt_set, alpha: float) -> list[int]:
    """Members a of opt_set with (1 + alpha) f(a) < f(e*).  Diagnostic only."""
    pool = inst.feasible_singletons()
    values = {e: inst.value((e,)) for e in pool}
    _, top = best_single(inst, values)
    return [a for a in sorted_ids(opt_set) if (1 + alpha) * inst.value((a,)) < top]


def sproutpp(inst: Instance, params: SproutPPParams, jobs: int = 1, lazy: bool = True) -> ResultRecord:
    t0 = time.perf_counter()
    oracle = inst.oracle
    start = oracle.call_count
    pool = inst.feasible_singletons()
    if not pool:
        raise EmptyInstanceError("no feasible single element")
    values = {e: oracle.evaluate((e,)) for e in pool}
    e_star, top = best_single(inst, values)
    t_c = params.counter_for(inst.n)
    counted, visited = draw_seeds(pool, values, (1 - params.alpha) * top, t_c, params.seed)

    outcomes = map_seeds(inst, [frozenset((e,)) for e in counted], jobs=jobs,
                         params=params.search_params(), reduce=False, mu=params.mu, lazy=lazy)
    best = pick_best(outcomes)
    solution, value = best.solution, best.value
    return ResultRecord(
        algo="sproutpp",
        solution=tuple(sorted_ids(solution)),
        value=value,
        oracle_calls=oracle.call_count - start,
        wall_ms=1000 * (time.perf_counter() - t0),
        seed=params.seed,
        extra={"visited": visited, "passed": len(counted)},
        info={"outcomes": outcomes, "sampled": counted, "e_star": e_star},
    )
