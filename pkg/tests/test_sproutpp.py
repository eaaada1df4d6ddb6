import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance, triangle_graph
from sproutkit.baselines import brute_force
from sproutkit.core import EmptyInstanceError, Instance, Knapsack, MatroidIntersection, ParamError
from sproutkit.objectives import CutObjective, ModularObjective, UniformMatroid, WeightedGraph
from sproutkit.sprout import SproutParams, headline_ratio, solve_seed, sprout, theory_params
from sproutkit.sproutpp import (
    SproutPPParams,
    alpha_bound,
    assumption_violations,
    best_single,
    draw_seeds,
    sample_order,
    smooth_update,
    sproutpp,
    success_probability,
)


def triangle_instance(cap=1):
    return Instance(CutObjective(triangle_graph()), [UniformMatroid(cap)], Knapsack(np.full((1, 4), 0.1), [1.0]))


def complete_unit_graph_instance(n, rng):
    # every singleton has value n-1 and every gain over a singleton is n-3,
    # so the ground-set reduction of SPROUT keeps everything
    edges = tuple((u, v, 1.0) for u in range(n) for v in range(u + 1, n))
    costs = rng.random((2, n)) * 0.5
    return Instance(CutObjective(WeightedGraph(n, edges)), [UniformMatroid(4)], Knapsack(costs, [1.0, 1.0]))


# --- best single element ------------------------------------------------------


def test_best_single_triangle():
    assert best_single(triangle_instance()) == (3, 5.0)


def test_best_single_tie_goes_to_smallest_id():
    inst = Instance(ModularObjective([2.0, 3.0, 3.0, 3.0]), [UniformMatroid(2)], Knapsack.empty(4))
    assert best_single(inst) == (1, 3.0)


def test_best_single_matches_scan(rng):
    for _ in range(5):
        inst = random_instance(20, rng, kind="diversity", k=2, m=2)
        pool = [e for e in range(20) if inst.is_feasible({e})]
        top = max(inst.value({e}) for e in pool)
        expect = min(e for e in pool if inst.value({e}) == top)
        assert best_single(inst) == (expect, top)


def test_best_single_empty():
    inst = Instance(ModularObjective([1.0, 1.0]), [UniformMatroid(0)], Knapsack.empty(2))
    with pytest.raises(EmptyInstanceError):
        best_single(inst)
    with pytest.raises(EmptyInstanceError):
        sproutpp(inst, SproutPPParams())


# --- formulas ----------------------------------------------------------------


def test_smooth_update_examples():
    for E in (True, False):
        assert smooth_update(7, E, 2.5, 1.0) == 7
    assert smooth_update(10, False, 19, 2.0) == pytest.approx(14.5)
    assert smooth_update(10, True, 1, 2.0) == pytest.approx(5.5)
    with pytest.raises(ParamError):
        smooth_update(10, True, 1, 0.5)


def test_alpha_bound_examples():
    assert alpha_bound(2, 1, 0.25) == pytest.approx(0.75 * 2.4375 / 1.5)
    assert alpha_bound(2, 1, 0.25) == pytest.approx(1.21875)
    assert alpha_bound(5, 2, 1e-12) == pytest.approx(5 / 2)
    assert 0.5 <= alpha_bound(2, 1, 0.25)


def test_success_probability_examples():
    assert success_probability(5, 100, 20) == pytest.approx(1 - math.exp(-1))
    assert success_probability(5, 100, 20) == pytest.approx(0.63212, abs=1e-5)
    assert success_probability(1, 50, 50) == pytest.approx(1 - math.exp(-1))
    assert success_probability(3, 10, 10**6) == pytest.approx(1.0)


def test_params_defaults_and_validation():
    p = SproutPPParams()
    assert (p.alpha, p.mu, p.ell, p.delta, p.eps, p.beta, p.gamma) == (0.5, 1.0, 2, 0.25, 0.25, 5e-4, 1e-6)
    assert p.counter_for(200) == 40 and p.counter_for(3) == 1
    with pytest.raises(ParamError):
        SproutPPParams(t_counter=0)
    with pytest.raises(ParamError):
        SproutPPParams(mu=0.9)
    with pytest.raises(ParamError):
        SproutPPParams(alpha=1.0)


# --- sampling ----------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 500), unique=True, max_size=60), st.integers(0, 2**63 - 1))
def test_sample_order_is_a_permutation(pool, seed):
    order = sample_order(pool, seed)
    assert sorted(order) == sorted(pool)
    assert order == sample_order(pool, seed)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 15), st.floats(0.0, 1.0))
def test_counter_semantics(seed, t_c, threshold):
    rng = np.random.default_rng(seed)
    pool = list(range(30))
    values = {e: float(rng.random()) for e in pool}
    counted, visited = draw_seeds(pool, values, threshold, t_c, seed)
    order = sample_order(pool, seed)
    seen = order[:visited]
    assert len(set(seen)) == len(seen)
    assert counted == [e for e in seen if values[e] >= threshold]
    assert len(counted) <= t_c
    if len(counted) < t_c:
        assert visited == len(pool)  # exhaustion guard
    else:
        assert values[seen[-1]] >= threshold  # stops right after the last counted seed


def test_run_reports_counts(rng):
    inst = random_instance(15, rng, kind="cut", m=2)
    rec = sproutpp(inst, SproutPPParams(t_counter=3, seed=11))
    assert rec.extra["passed"] == len(rec.info["sampled"]) <= 3
    assert rec.extra["visited"] >= rec.extra["passed"]
    assert rec.seed == 11
    e_star, top = best_single(inst)
    assert all(inst.value({e}) >= 0.5 * top for e in rec.info["sampled"])


# --- runs --------------------------------------------------------------------


def test_seeded_runs_reproduce(rng):
    inst = random_instance(20, rng, kind="diversity", m=2)
    a = sproutpp(inst.fresh(), SproutPPParams(seed=7))
    b = sproutpp(inst.fresh(), SproutPPParams(seed=7))
    assert (a.solution, a.value, a.oracle_calls) == (b.solution, b.value, b.oracle_calls)
    assert inst.is_feasible(a.solution)


def test_parallel_matches_serial(rng):
    inst = random_instance(20, rng, kind="cut", m=2)
    a = sproutpp(inst.fresh(), SproutPPParams(seed=3), jobs=1)
    b = sproutpp(inst.fresh(), SproutPPParams(seed=3), jobs=2)
    assert (a.solution, a.value, a.oracle_calls) == (b.solution, b.value, b.oracle_calls)


def test_mu_one_probe_sequence_matches_sprout(rng):
    for _ in range(3):
        inst = complete_unit_graph_instance(10, rng)
        pp = sproutpp(inst.fresh(), SproutPPParams(t_counter=10, mu=1.0, seed=int(rng.integers(1 << 30))))
        sp = sprout(inst.fresh(), SproutParams())
        by_seed = {o.A: o for o in sp.info["outcomes"]}
        assert len(pp.info["outcomes"]) == 10
        for o in pp.info["outcomes"]:
            ref = by_seed[o.A]
            assert ref.ground_size == o.ground_size == 9
            assert [p[0] for p in o.probes] == [p[0] for p in ref.probes]
            assert o.solution == ref.solution
        assert pp.value == sp.value


def test_mu_one_matches_unreduced_pipeline(rng):
    inst = random_instance(12, rng, kind="cut", m=2)
    rec = sproutpp(inst, SproutPPParams(seed=5, t_counter=12))
    for o in rec.info["outcomes"]:
        ref = solve_seed(inst.fresh(), o.A, SproutPPParams().search_params(), reduce=False, mu=1.0)
        assert o.probes == ref.probes and o.solution == ref.solution


@pytest.mark.parametrize("mu", [1.0, 1.5, 2.0, 4.0])
def test_smooth_interval_contraction(mu, rng):
    for _ in range(3):
        inst = random_instance(16, rng, kind="cut", m=2)
        rec = sproutpp(inst, SproutPPParams(t_counter=16, mu=mu, beta=0.02, seed=1))
        for o in rec.info["outcomes"]:
            widths = [b0 - b1 for b1, b0 in o.intervals]
            assert all(w >= 0 for w in widths)
            for prev, cur in zip(widths, widths[1:]):
                assert cur <= prev * (2 * mu - 1) / (2 * mu) + 1 + 1e-12


def test_sampled_seed_inside_opt_meets_bound(rng):
    tp = theory_params(1, 1, 0.25)
    hits = 0
    for _ in range(10):
        inst = random_instance(10, rng, kind="cut", k=1, m=1)
        bf = brute_force(inst)
        params = SproutPPParams(t_counter=10, ell=tp.ell, beta=tp.beta, gamma=tp.gamma, seed=int(rng.integers(1000)))
        rec = sproutpp(inst, params)
        if any(e in bf.opt_set for e in rec.info["sampled"]):
            hits += 1
            assert rec.value * headline_ratio(1, 1, 0.25) >= bf.opt_value - 1e-9
    assert hits > 0


def test_full_enumeration_equals_sprout_when_nothing_is_reduced(rng):
    inst = complete_unit_graph_instance(12, rng)
    pp = sproutpp(inst.fresh(), SproutPPParams(t_counter=12, alpha=0.9, seed=9))
    sp = sprout(inst.fresh(), SproutParams())
    assert pp.extra["passed"] == 12
    assert pp.value == sp.value


def test_assumption_diagnostic():
    inst = Instance(ModularObjective([10.0, 6.0, 8.0]), [UniformMatroid(3)], Knapsack.empty(3))
    assert assumption_violations(inst, {0, 1, 2}, 0.5) == [1]
    assert assumption_violations(inst, {0, 1, 2}, 0.99) == []


def test_matroids_are_respected(rng):
    inst = random_instance(14, rng, kind="cut", k=2, m=1)
    assert isinstance(inst.matroids, MatroidIntersection) and inst.k == 2
    for seed in range(5):
        rec = sproutpp(inst.fresh(), SproutPPParams(seed=seed))
        assert inst.is_feasible(rec.solution)
