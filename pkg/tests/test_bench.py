import math

import numpy as np
import pytest

from sproutkit.baselines import greedy
from sproutkit.bench import (
    ConfigError,
    ExperimentConfig,
    budget_grid,
    build_maxcut_instance,
    build_movie_instance,
    derive_seed,
    gen_er_graph,
    make_instance,
    records_to_csv,
    run_experiment,
    summarize,
    synthetic_movies,
)
from sproutkit.core import Instance, Knapsack
from sproutkit.io import (
    InstanceFormatError,
    MovieRow,
    instance_from_dict,
    instance_to_dict,
    read_movies,
    save_instance,
    write_movies,
)
from sproutkit.objectives import ModularObjective, UniformMatroid

# --- graphs ------------------------------------------------------------------


def test_er_extremes():
    assert gen_er_graph(10, 0.0, 1).edges == ()
    g = gen_er_graph(4, 1.0, 1)
    assert len(g.edges) == 6
    assert all(0 <= w <= 1 for _, _, w in g.edges)


def test_er_deterministic():
    assert gen_er_graph(50, 0.1, 9) == gen_er_graph(50, 0.1, 9)
    assert gen_er_graph(50, 0.1, 9) != gen_er_graph(50, 0.1, 10)


def test_er_edge_count_statistic():
    counts = np.array([len(gen_er_graph(1000, 0.01, s).edges) for s in range(50)])
    pairs = 1000 * 999 // 2
    expect = pairs * 0.01
    se = math.sqrt(pairs * 0.01 * 0.99) / math.sqrt(50)
    assert expect == pytest.approx(4995)
    assert abs(counts.mean() - expect) <= 3 * se


def test_er_rejects_bad_p():
    with pytest.raises(ValueError):
        gen_er_graph(5, 1.5, 0)


# --- max-cut instances ---------------------------------------------------------


def test_maxcut_costs():
    g = gen_er_graph(60, 0.05, 3)
    inst = build_maxcut_instance(g)
    deg = g.degrees()
    isolated = int(np.flatnonzero(deg == 0)[0])
    assert inst.knapsack.costs[0, isolated] == 0
    assert inst.knapsack.costs[1, 37] == pytest.approx(7 / 40)
    assert inst.knapsack.costs[0, 5] == pytest.approx(deg[5] / 100)
    assert inst.matroids.members[0].cap == 10


def test_maxcut_feasibility_definitional(rng):
    g = gen_er_graph(80, 0.05, 4)
    inst = build_maxcut_instance(g, budget_fraction=0.7)
    deg = g.degrees()
    assert inst.is_feasible(set())
    for _ in range(300):
        S = [int(x) for x in rng.choice(80, size=int(rng.integers(1, 13)), replace=False)]
        ok = len(S) <= 10 and deg[S].sum() <= 70 + 1e-9 and sum(v % 10 for v in S) <= 28 + 1e-9
        assert inst.is_feasible(S) == ok


# --- movie instances ---------------------------------------------------------


def _rows():
    return [
        MovieRow("a", 10.0, 1995, ("Drama",), (0.0, 0.0)),
        MovieRow("b", 6.0, 1990, ("Drama", "Comedy"), (0.3, 0.4)),
        MovieRow("c", 8.0, 2001, ("Comedy",), (1.0, 0.0)),
    ]


def test_movie_costs():
    inst = build_movie_instance(_rows(), use_third_knapsack=True)
    c = inst.knapsack.costs
    assert c[0, 0] == 0 and c[0, 1] == pytest.approx(4 / 20)
    assert c[1, 0] == 0 and c[1, 1] == pytest.approx(5 / 30)
    assert c[2, 1] == pytest.approx(7 / 30)
    assert c[2, 1] == pytest.approx(0.2333, abs=1e-4)
    assert inst.m == 3 and build_movie_instance(_rows()).m == 2


def test_movie_genre_matroids():
    inst = build_movie_instance(_rows(), genre_cap=1)
    # multi-genre rows give one matroid per genre plus the total cap
    assert inst.k == 3
    assert not inst.is_feasible({0, 1})  # two dramas
    assert inst.is_feasible({0, 2})
    single = [MovieRow(str(i), 7.0, 1995, (g,), (float(i),)) for i, g in enumerate("xxyy")]
    assert build_movie_instance(single).k == 2


def test_movie_objective_is_diversity():
    inst = build_movie_instance(_rows(), lam=4.0)
    s01 = math.exp(-4 * 0.5)
    assert inst.objective.sim[0, 1] == pytest.approx(s01)
    assert inst.value({0}) == pytest.approx((inst.objective.sim[:, 0].sum() - 1) / 3)


def test_movie_csv_roundtrip(tmp_path):
    rows = synthetic_movies(25, 4, seed=2)
    path = tmp_path / "movies.csv"
    write_movies(rows, path)
    assert read_movies(path) == rows


def test_movie_csv_bad_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("id,rating,year,genres,f1\na,7.5,1999,Drama,0.1\nb,11,2000,Drama,0.2\n")
    with pytest.raises(InstanceFormatError, match="row 3"):
        read_movies(path)
    path.write_text("id,rating,genres,f1\na,7.5,Drama,0.1\n")
    with pytest.raises(InstanceFormatError, match="missing columns"):
        read_movies(path)


def test_synthetic_movies_schema():
    rows = synthetic_movies(40, 5, seed=1)
    assert len(rows) == 40 and all(len(r.features) == 5 and 0 <= r.rating <= 10 for r in rows)
    assert rows == synthetic_movies(40, 5, seed=1)


def test_instance_dict_roundtrip(rng):
    inst = build_movie_instance(synthetic_movies(12, 3, seed=3), use_third_knapsack=True)
    back = instance_from_dict(instance_to_dict(inst))
    for _ in range(50):
        S = [int(x) for x in rng.choice(12, size=3, replace=False)]
        assert back.is_feasible(S) == inst.is_feasible(S)
        assert back.value(S) == pytest.approx(inst.value(S))


def test_instance_dict_errors():
    with pytest.raises(InstanceFormatError):
        instance_from_dict({"n": 2, "objective": {"kind": "nope"}})
    with pytest.raises(InstanceFormatError):
        instance_from_dict({"n": 3, "objective": {"kind": "modular", "weights": [1, 2]}})
    with pytest.raises(InstanceFormatError):
        instance_from_dict({"objective": {"kind": "modular", "weights": [1, 2]}})


# --- sweeps ------------------------------------------------------------------


def small_cfg(**kw):
    base = dict(instance={"kind": "maxcut", "n": 40, "p": 0.1, "seed": 2}, algorithms=["sproutpp", "greedy"],
                sweep_values=[0.7, 1.0], repeats=3, seed=5)
    base.update(kw)
    return ExperimentConfig(**base)


def test_budget_grid():
    grid = budget_grid()
    assert len(grid) == 10 and grid[0] == 0.64 and grid[-1] == 1.0
    assert np.allclose(np.diff(grid), 0.04)


def test_repeats_and_seeds():
    recs = run_experiment(small_cfg(algorithms=["sproutpp"], sweep_values=[1.0], repeats=10))
    assert len(recs) == 10
    assert len({r.seed for r in recs}) == 10
    assert [r.repeat for r in recs] == list(range(10))


def test_single_deterministic_run():
    recs = run_experiment(small_cfg(algorithms=["greedy"], sweep_values=[1.0], repeats=10))
    assert len(recs) == 1 and recs[0].seed is None


def test_records_sorted_and_feasible():
    cfg = small_cfg(algorithms=["greedy", "sproutpp", "dssgs", "rp_greedy"])
    recs = run_experiment(cfg)
    keys = [(cfg.sweep_values.index(r.sweep_value), r.algo, r.repeat) for r in recs]
    assert keys == sorted(keys)
    assert len(recs) == 2 * (3 + 1 + 1 + 1)
    for r in recs:
        inst = make_instance(cfg.instance, cfg.sweep_kind, r.sweep_value)
        assert inst.is_feasible(r.solution)
        assert inst.value(r.solution) == pytest.approx(r.value)


def test_csv_reproducible_and_parallel_safe():
    a = records_to_csv(run_experiment(small_cfg()))
    b = records_to_csv(run_experiment(small_cfg()))
    c = records_to_csv(run_experiment(small_cfg(), jobs=2))
    assert a == b == c
    header = a.splitlines()[0]
    assert header == "sweep_kind,sweep_value,algo,repeat,seed,value,oracle_calls,wall_ms,set"


def test_cardinality_sweep():
    recs = run_experiment(small_cfg(sweep_kind="cardinality", sweep_values=[2, 4], algorithms=["greedy"]))
    assert [len(r.solution) <= int(r.sweep_value) for r in recs] == [True, True]


def test_config_errors():
    for bad in (dict(algorithms=[]), dict(algorithms=["fantom"]), dict(algorithms=["simplex"]), dict(repeats=0),
                dict(sweep_values=[0.0]), dict(sweep_values=[1.2]), dict(sweep_kind="cardinality", sweep_values=[0]),
                dict(instance={"kind": "lattice"})):
        with pytest.raises(ConfigError):
            small_cfg(**bad).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"algorithm": ["greedy"]})


def test_fantom_slot_reserved():
    with pytest.raises(ConfigError, match="reserved"):
        small_cfg(algorithms=["greedy", "fantom"]).validate()


def test_derived_seeds_distinct():
    seeds = {derive_seed(0, s, r) for s in range(10) for r in range(10)}
    assert len(seeds) == 100


def test_summary_rows():
    recs = run_experiment(small_cfg())
    rows = summarize(recs)
    assert {(v, a) for v, a, *_ in rows} == {(v, a) for v in (0.7, 1.0) for a in ("sproutpp", "greedy")}
    assert all(count == (3 if a == "sproutpp" else 1) for _, a, _, _, count in rows)


def test_file_instance_sweep(tmp_path):
    path = tmp_path / "inst.json"
    save_instance(build_maxcut_instance(gen_er_graph(30, 0.2, 1)), path)
    cfg = small_cfg(instance={"kind": "file", "path": str(path)}, algorithms=["greedy"])
    recs = run_experiment(cfg)
    assert len(recs) == 2


# --- budget monotonicity of greedy --------------------------------------------


def test_greedy_monotone_in_budget_with_uniform_costs():
    # with equal costs a single knapsack acts as a cardinality bound
    w = np.linspace(1, 3, 15)
    vals = []
    for frac in budget_grid():
        inst = Instance(ModularObjective(w), [UniformMatroid(15)], Knapsack(np.ones((1, 15)), [10 * frac]))
        vals.append(greedy(inst).value)
    assert vals == sorted(vals)


def test_greedy_budget_monotonicity_fails_for_unequal_costs():
    # a costly high-value item taken first can crowd out a better pair
    def value_at(budget):
        inst = Instance(ModularObjective([10.0, 6.0, 6.0]), [UniformMatroid(3)],
                        Knapsack(np.array([[1.0, 0.49, 0.49]]), [budget]))
        return greedy(inst).value

    assert value_at(0.99) == 12.0
    assert value_at(1.0) == 10.0
