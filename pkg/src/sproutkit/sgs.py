"""KnapsackSGS: simultaneous greedy with a density ratio and a decreasing threshold."""

from __future__ import annotations

import dataclasses
import logging

import numpy as np

from .core import FEAS_TOL, Knapsack, Matroid, ParamError

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SgsParams:
    ell: int
    rho: float
    eps: float

    def __post_init__(self):
        if self.ell < 1:
            raise ParamError("ell must be at least 1")
        if not 0 < self.eps < 1:
            raise ParamError("eps must lie in (0, 1)")
        if self.rho < 0:
            raise ParamError("rho must be non-negative")


@dataclasses.dataclass
class SgsOutcome:
    best: frozenset
    best_value: float
    candidates: list
    values: list
    violated: bool
    oracle_calls: int
    v_max: float
    rounds: int = 0
    trace: list = dataclasses.field(default_factory=list)


def _calls(z) -> int:
    oracle = getattr(z, "oracle", z)
    return oracle.call_count


def _empty(ell, v_max, calls):
    return SgsOutcome(frozenset(), 0.0, [frozenset()] * ell, [0.0] * ell, False, calls, v_max)


def knapsack_sgs(
    z,
    ground,
    matroid: Matroid,
    knapsack: Knapsack,
    params: SgsParams,
    singleton_gains: dict | None = None,
    lazy: bool = True,
) -> SgsOutcome:
    """Grow ``params.ell`` disjoint sets over ``ground``.

    ``z`` supplies ``gain(S, e)``.  ``knapsack`` must already be normalised
    (unit budgets).  Pairs (a, i) are scanned with elements in ascending id
    order and candidate index inner; the first pair that passes wins ``a``.

    ``violated`` latches when a pair clears the matroid and density/threshold
    tests but ``S_i + a`` breaks a knapsack row.

    With ``lazy`` the last computed gain of each pair is kept as an upper
    bound (valid for submodular ``z``) and pairs that can no longer pass are
    never re-evaluated.  Every accept/reject decision is the same as in the
    eager scan; only the number of oracle calls differs.

    ``singleton_gains`` may carry precomputed ``z({e})`` values.
    """
    ell, rho, eps = params.ell, params.rho, params.eps
    start_calls = _calls(z)
    ground = sorted(set(int(e) for e in ground))
    N = len(ground)
    if N == 0:
        return _empty(ell, 0.0, 0)

    C = knapsack.costs[:, ground] if knapsack.m else np.zeros((0, N))
    dens = rho * C.sum(axis=0)
    empty = frozenset()
    if singleton_gains is None:
        g0 = np.array([z.gain(empty, e) for e in ground], dtype=float)
    else:
        g0 = np.array([singleton_gains[e] for e in ground], dtype=float)

    single_ok = np.array(
        [matroid.is_independent((e,)) and bool(np.all(C[:, j] <= 1 + FEAS_TOL)) for j, e in enumerate(ground)],
        dtype=bool,
    )
    v_max = float(g0[single_ok].max()) if single_ok.any() else 0.0
    if v_max <= 0:
        return _empty(ell, v_max, _calls(z) - start_calls)

    sets = [set() for _ in range(ell)]
    frozen = [empty] * ell
    used = np.zeros((ell, C.shape[0]))
    values = [0.0] * ell
    violated = False
    trace = []

    ub = np.repeat(g0[:, None], ell, axis=1)
    seen_ver = np.zeros((N, ell), dtype=np.int64)
    cur_ver = [0] * ell
    alive = np.ones(N, dtype=bool)

    floor = eps * v_max / N
    tau = v_max
    rounds = 0
    t = 0
    while tau > floor:
        rounds += 1
        need = np.maximum(tau, dens)
        if lazy:
            scan = np.flatnonzero(alive & (ub.max(axis=1) >= need))
        else:
            scan = np.flatnonzero(alive)
        for j in scan:
            a = ground[j]
            thr = need[j]
            for i in range(ell):
                if lazy:
                    if ub[j, i] < thr:
                        continue
                    if not matroid.is_independent(frozen[i] | {a}):
                        ub[j, i] = -np.inf
                        continue
                    if seen_ver[j, i] != cur_ver[i]:
                        ub[j, i] = z.gain(frozen[i], a)
                        seen_ver[j, i] = cur_ver[i]
                    g = ub[j, i]
                else:
                    if not matroid.is_independent(frozen[i] | {a}):
                        continue
                    g = z.gain(frozen[i], a)
                if g < thr:
                    continue
                if np.any(used[i] + C[:, j] > 1 + FEAS_TOL):
                    violated = True
                    if lazy:
                        # costs are non-negative, so S_i + a stays infeasible
                        ub[j, i] = -np.inf
                    continue
                sets[i].add(a)
                frozen[i] = frozenset(sets[i])
                used[i] += C[:, j]
                cur_ver[i] += 1
                values[i] += g
                alive[j] = False
                ub[j, :] = -np.inf
                t += 1
                trace.append((t, a, i, float(g), float(tau), float(dens[j])))
                if log.isEnabledFor(logging.DEBUG):
                    log.debug("t=%d e=%d i=%d gain=%r tau=%r dens=%r", t, a, i, float(g), float(tau), float(dens[j]))
                break
        tau *= 1.0 - eps

    best_i = int(np.argmax(values))
    return SgsOutcome(
        best=frozen[best_i],
        best_value=values[best_i],
        candidates=list(frozen),
        values=values,
        violated=violated,
        oracle_calls=_calls(z) - start_calls,
        v_max=v_max,
        rounds=rounds,
        trace=trace,
    )
