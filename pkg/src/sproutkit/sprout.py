"""SPROUT: partial enumeration of seed sets plus a density-ratio search over KnapsackSGS."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor

from .core import (
    Instance,
    ParamError,
    ReductionError,
    Residual,
    ResultRecord,
    ValueOracle,
    as_set,
    sorted_ids,
)
from .sgs import SgsParams, knapsack_sgs

log = logging.getLogger(__name__)

MAX_SEARCH_STEPS = 500


@dataclasses.dataclass(frozen=True)
class TheoryParams:
    p_cap: int
    ell: int
    p: int
    beta: float
    gamma: float


def theory_params(k: int, m: int, eps: float, monotone: bool = False) -> TheoryParams:
    """Correction parameters that make the search range contain the ideal ratio.

    ``monotone`` uses ell = k + 1 (hence p = k), the setting behind the
    (k + m + 1) guarantee for monotone objectives.
    """
    if k < 1 or m < 1:
        raise ParamError("theory parameters need k >= 1 and m >= 1")
    P = max(math.ceil(math.sqrt(1 + m)), k)
    ell = k + 1 if monotone else P + 1
    p = max(ell - 1, k)
    denom = p + 1 + m * (1 - eps)
    beta = (1 - eps) * (1 - 1 / ell - eps) / denom
    gamma = (p + 1) / denom
    if not 0 < eps < 1 or beta <= 0:
        raise ParamError(f"eps={eps} too large for ell={ell} (beta would be {beta:.3g})")
    return TheoryParams(p_cap=P, ell=ell, p=p, beta=beta, gamma=gamma)


@dataclasses.dataclass(frozen=True)
class SproutParams:
    c_enum: int = 1
    ell: int = 2
    delta: float = 0.25
    eps: float = 0.25
    beta: float = 5e-4
    gamma: float = 1e-6

    def __post_init__(self):
        if self.c_enum < 1:
            raise ParamError("c_enum must be at least 1")
        if self.ell < 1:
            raise ParamError("ell must be at least 1")
        if not 0 < self.delta < 1 or not 0 < self.eps < 1:
            raise ParamError("delta and eps must lie in (0, 1)")
        if self.beta <= 0 or self.gamma < 0:
            raise ParamError("beta must be positive and gamma non-negative")

    @classmethod
    def theory(cls, k: int, m: int, eps: float = 0.25, c_enum: int = 1, delta: float | None = None,
               monotone: bool = False) -> "SproutParams":
        tp = theory_params(k, m, eps, monotone=monotone)
        return cls(c_enum=c_enum, ell=tp.ell, delta=eps if delta is None else delta, eps=eps,
                   beta=tp.beta, gamma=tp.gamma)


def approx_bound(k: int, m: int, eps: float, c_enum: int, r: float) -> tuple[float, float]:
    """Guaranteed fraction of OPT and its reciprocal (the approximation ratio)."""
    if r < 1:
        raise ParamError("r must be at least 1")
    P = max(math.ceil(math.sqrt(1 + m)), k)
    C = c_enum
    first = (1 - eps) ** 2 * (1 - 2 * eps) / (k + m + 3 + 2 * math.sqrt(m + 1))
    second = ((C - eps) * (P + 1) + (C - 1) * m * (1 - eps) - C * (1 - eps) ** 3) / (
        r * (P + 1 + m * (1 - eps))
    )
    coef = first + second
    return coef, (1 / coef if coef > 0 else math.inf)


def headline_ratio(k: int, m: int, eps: float, monotone: bool = False) -> float:
    if monotone:
        return (1 + eps) * (k + m + 1)
    return (1 + eps) * (k + m + 3 + 2 * math.sqrt(m + 1))


def reduced_ground_set(oracle: ValueOracle, A, c_enum: int, pool=None, f_A: float | None = None,
                       gains: dict | None = None) -> list[int]:
    """Elements outside A whose gain over A is at most f(A) / C."""
    A = as_set(A)
    if f_A is None:
        f_A = oracle.evaluate(A)
    pool = range(oracle.n) if pool is None else pool
    out = []
    for e in pool:
        if e in A:
            continue
        g = gains[e] if gains is not None else oracle.gain(A, e)
        if c_enum * g <= f_A:
            out.append(e)
    return out


def density_ratio(beta, v_max, delta, b, gamma, f_A, c_enum) -> float:
    return beta * v_max * (1 + delta) ** b + gamma * f_A / c_enum


def smooth_update(b: int, E: bool, old: float, mu: float) -> float:
    """New value of the bound selected by E (E=1 -> lower, E=0 -> upper)."""
    if mu < 1:
        raise ParamError("mu must be at least 1")
    return b + (1 - 2 * int(E)) * (1 - 1 / mu) * abs(old - b)


def initial_upper_index(size: int, delta: float) -> int:
    # natural log: (1 + delta)^b0 >= size because ln(1 + delta) < delta
    return math.ceil(math.log(size) / delta)


@dataclasses.dataclass
class SearchResult:
    best: frozenset
    best_value: float
    collected: list
    probes: list
    v_max: float = 0.0
    intervals: list = dataclasses.field(default_factory=list)


def binary_search_density(oracle: ValueOracle, A, f_A: float, ground, matroid, knapsack,
                          params: SproutParams, gains: dict, mu: float = 1.0,
                          lazy: bool = True) -> SearchResult:
    """Probe a geometric grid of density ratios, steering by the violation flag.

    ``matroid`` and ``knapsack`` are the contracted / renormalised constraints
    over ``ground``.  ``gains`` maps each ground element to f(e | A).  Each
    collected entry is (S, f(A | S)); ``probes`` records (b, rho, E, value)
    and ``intervals`` the (b1, b0) pair before every step plus the final one.
    With mu = 1 this is plain bisection; mu > 1 moves the updated endpoint only
    part of the way.  A probe index already visited reuses its earlier run.
    """
    A = as_set(A)
    collected = [(frozenset(), f_A)]
    probes = []
    ground = sorted(ground)
    if not ground:
        return SearchResult(frozenset(), f_A, collected, probes)

    single_ok = [e for e in ground if matroid.is_independent((e,)) and knapsack.is_feasible((e,))]
    v_max = max((gains[e] for e in single_ok), default=0.0)
    if v_max <= 0:
        return SearchResult(frozenset(), f_A, collected, probes, v_max)

    z = Residual(oracle, A, f_A)
    b1, b0 = 1.0, float(initial_upper_index(len(ground), params.delta))
    seen = {}
    steps = 0
    intervals = [(b1, b0)]
    while abs(b1 - b0) > 1 and steps < MAX_SEARCH_STEPS:
        steps += 1
        b = math.floor((b1 + b0 + 1) / 2)
        rho = density_ratio(params.beta, v_max, params.delta, b, params.gamma, f_A, params.c_enum)
        if b in seen:
            E = seen[b]
        else:
            out = knapsack_sgs(z, ground, matroid, knapsack, SgsParams(params.ell, rho, params.eps),
                               singleton_gains=gains, lazy=lazy)
            value = oracle.evaluate(A | out.best)
            collected.append((out.best, value))
            E = out.violated
            seen[b] = E
            probes.append((b, rho, E, value))
        if E:
            b1 = smooth_update(b, True, b1, mu)
        else:
            b0 = smooth_update(b, False, b0, mu)
        intervals.append((b1, b0))

    best, best_value = collected[0]
    for S, v in collected[1:]:
        if v > best_value:
            best, best_value = S, v
    return SearchResult(best, best_value, collected, probes, v_max, intervals)


@dataclasses.dataclass
class SeedOutcome:
    A: frozenset
    solution: frozenset
    value: float
    probes: list
    ground_size: int
    oracle_calls: int
    intervals: list = dataclasses.field(default_factory=list)


def solve_seed(inst: Instance, A, params: SproutParams, reduce: bool = True, mu: float = 1.0,
               gamma_zero: bool = False, lazy: bool = True) -> SeedOutcome:
    """One seed set: residual objective, reduced ground set, contracted constraints, search."""
    oracle = inst.oracle
    start = oracle.call_count
    A = as_set(A)
    f_A = oracle.evaluate(A)
    pool = [e for e in inst.feasible_singletons() if e not in A]
    gains = {e: oracle.gain(A, e) for e in pool}
    if reduce:
        ground = reduced_ground_set(oracle, A, params.c_enum, pool=pool, f_A=f_A, gains=gains)
    else:
        ground = pool
    try:
        knap = inst.knapsack.reduce(A)
    except ReductionError:
        return SeedOutcome(A, A, f_A, [], 0, oracle.call_count - start)
    matroid = inst.matroids.contract(A)
    if gamma_zero:
        params = dataclasses.replace(params, gamma=0.0)
    res = binary_search_density(oracle, A, f_A, ground, matroid, knap, params, gains, mu=mu, lazy=lazy)
    if log.isEnabledFor(logging.INFO):
        log.info("A=%s best=%r probes=%d", sorted_ids(A), res.best_value, len(res.probes))
    return SeedOutcome(A, A | res.best, res.best_value, res.probes, len(ground), oracle.call_count - start,
                       res.intervals)


# --- parallel map over seeds -------------------------------------------------

_WORKER = {}


def _init_worker(inst, kwargs):
    _WORKER["inst"] = inst
    _WORKER["kwargs"] = kwargs


def _run_chunk(seeds):
    inst = _WORKER["inst"]
    return [solve_seed(inst, A, **_WORKER["kwargs"]) for A in seeds]


def map_seeds(inst: Instance, seeds, jobs: int = 1, **kwargs) -> list[SeedOutcome]:
    """solve_seed over every seed, in order.  Calls are credited to ``inst.oracle``."""
    seeds = list(seeds)
    if jobs <= 1 or len(seeds) < 2:
        return [solve_seed(inst, A, **kwargs) for A in seeds]
    size = max(1, math.ceil(len(seeds) / (4 * jobs)))
    chunks = [seeds[i:i + size] for i in range(0, len(seeds), size)]
    inst.feasible_singletons()
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(inst, kwargs)) as ex:
        out = [o for chunk in ex.map(_run_chunk, chunks) for o in chunk]
    inst.oracle.call_count += sum(o.oracle_calls for o in out)
    return out


def pick_best(outcomes) -> SeedOutcome | None:
    best = None
    for o in outcomes:
        if best is None or o.value > best.value:
            best = o
    return best


def feasible_seeds(inst: Instance, c_enum: int):
    pool = inst.feasible_singletons()
    for A in itertools.combinations(pool, c_enum):
        if inst.is_feasible(A):
            yield frozenset(A)


def _small_fallback(inst: Instance, c_enum: int):
    oracle = inst.oracle
    best, best_value = frozenset(), oracle.evaluate(frozenset())
    pool = inst.feasible_singletons()
    for size in range(1, c_enum):
        for A in itertools.combinations(pool, size):
            if inst.is_feasible(A):
                v = oracle.evaluate(A)
                if v > best_value:
                    best, best_value = frozenset(A), v
    return best, best_value


def sprout(inst: Instance, params: SproutParams, jobs: int = 1, lazy: bool = True) -> ResultRecord:
    t0 = time.perf_counter()
    start = inst.oracle.call_count
    seeds = list(feasible_seeds(inst, params.c_enum))
    outcomes = map_seeds(inst, seeds, jobs=jobs, params=params, reduce=True, lazy=lazy)
    best = pick_best(outcomes)
    if best is None:
        solution, value = _small_fallback(inst, params.c_enum)
    else:
        solution, value = best.solution, best.value
    return ResultRecord(
        algo="sprout",
        solution=tuple(sorted_ids(solution)),
        value=value,
        oracle_calls=inst.oracle.call_count - start,
        wall_ms=1000 * (time.perf_counter() - t0),
        extra={"seeds": len(seeds)},
        info={"outcomes": outcomes},
    )

