"""Instance generators and parameter sweeps for the max-cut and movie experiments."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .baselines import density_search_sgs, greedy, repeated_greedy
from .core import Instance, Knapsack, MatroidIntersection, SproutError
from .io import MovieRow, load_instance, read_movies
from .objectives import (
    CutObjective,
    DiversityObjective,
    PartitionMatroid,
    UniformMatroid,
    WeightedGraph,
    similarity_from_features,
)
from .sprout import SproutParams, sprout
from .sproutpp import SproutPPParams, sproutpp

log = logging.getLogger(__name__)

ALGORITHMS = ("sprout", "sproutpp", "greedy", "rp_greedy", "dssgs")
RANDOMIZED = {"sproutpp"}
RESERVED = {"fantom"}
CSV_COLUMNS = ["sweep_kind", "sweep_value", "algo", "repeat", "seed", "value", "oracle_calls", "wall_ms", "set"]


class ConfigError(SproutError, ValueError):
    pass


# ---------------------------------------------------------------------------
# generators


def gen_er_graph(n: int, p: float, seed: int) -> WeightedGraph:
    """G(n, p) with i.i.d. uniform [0, 1] edge weights."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    weights = rng.random(int(keep.sum()))
    edges = tuple((int(u), int(v), float(w)) for u, v, w in zip(iu[keep], ju[keep], weights))
    return WeightedGraph(n, edges)


def build_maxcut_instance(g: WeightedGraph, cap: int = 10, degree_budget: float = 100.0,
                          digit_budget: float = 40.0, budget_fraction: float = 1.0) -> Instance:
    """Cut objective, |S| <= cap, degree-sum and last-digit-sum knapsacks."""
    if degree_budget <= 0 or digit_budget <= 0:
        raise ValueError("budgets must be positive")
    deg = g.degrees().astype(float)
    digits = np.arange(g.n) % 10
    costs = np.vstack([deg, digits.astype(float)])
    budgets = np.array([degree_budget, digit_budget]) * budget_fraction
    return Instance(CutObjective(g), MatroidIntersection([UniformMatroid(cap)]), Knapsack(costs, budgets),
                    name=f"maxcut-n{g.n}")


GENRES = ("Action", "Comedy", "Drama", "Romance", "Thriller", "Horror", "SciFi", "Animation")


def synthetic_movies(n: int = 300, d: int = 8, seed: int = 0) -> list[MovieRow]:
    """Random rows with the movie CSV schema (ratings, years 1980-2010, 1-3 genres)."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        rating = float(np.round(np.clip(rng.normal(6.5, 1.5), 0, 10), 1))
        year = int(rng.integers(1980, 2011))
        k = int(rng.integers(1, 4))
        genres = tuple(sorted(rng.choice(GENRES, size=k, replace=False).tolist()))
        features = tuple(float(x) for x in np.round(rng.normal(0.0, 0.25, d), 6))
        rows.append(MovieRow(str(i), rating, year, genres, features))
    return rows


def genre_matroids(rows, genre_cap: int) -> list:
    """Per-genre caps.  One partition matroid when genres are disjoint, else one matroid per genre."""
    members = {}
    for idx, r in enumerate(rows):
        for gname in r.genres:
            members.setdefault(gname, []).append(idx)
    names = sorted(members)
    if all(len(r.genres) <= 1 for r in rows):
        return [PartitionMatroid([members[g] for g in names], [genre_cap] * len(names))] if names else []
    return [PartitionMatroid([members[g]], [genre_cap]) for g in names]


def build_movie_instance(rows, lam: float = 4.0, genre_cap: int = 2, total_cap: int = 10,
                         rating_budget: float = 20.0, year_budgets=(30.0, 30.0),
                         use_third_knapsack: bool = False, budget_fraction: float = 1.0) -> Instance:
    rows = list(rows)
    if not rows:
        raise ValueError("no movie rows")
    sim = similarity_from_features([r.features for r in rows], lam)
    ratings = np.array([r.rating for r in rows])
    years = np.array([r.year for r in rows], dtype=float)
    costs = [10.0 - ratings, np.abs(1995.0 - years)]
    budgets = [rating_budget, year_budgets[0]]
    if use_third_knapsack:
        costs.append(np.abs(1997.0 - years))
        budgets.append(year_budgets[1])
    matroids = [UniformMatroid(total_cap)] + genre_matroids(rows, genre_cap)
    knap = Knapsack(np.vstack(costs), np.array(budgets) * budget_fraction)
    return Instance(DiversityObjective(sim), MatroidIntersection(matroids), knap, name=f"movies-n{len(rows)}")


# ---------------------------------------------------------------------------
# experiments


def budget_grid(lo: float = 0.64, hi: float = 1.0, points: int = 10) -> list[float]:
    return [round(float(x), 10) for x in np.linspace(lo, hi, points)]


@dataclasses.dataclass
class ExperimentConfig:
    instance: dict = dataclasses.field(default_factory=lambda: {"kind": "maxcut", "n": 200, "p": 0.01, "seed": 0})
    algorithms: list = dataclasses.field(default_factory=lambda: ["sproutpp", "greedy", "rp_greedy", "dssgs"])
    sweep_kind: str = "budget"
    sweep_values: list = dataclasses.field(default_factory=budget_grid)
    repeats: int = 10
    seed: int = 0
    params: dict = dataclasses.field(default_factory=dict)

    def validate(self) -> None:
        if not self.algorithms:
            raise ConfigError("no algorithms given")
        for a in self.algorithms:
            if a in RESERVED:
                raise ConfigError(f"{a} is a reserved comparator slot and is not available")
            if a not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {a!r}")
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")
        if self.sweep_kind not in ("budget", "cardinality"):
            raise ConfigError(f"unknown sweep kind {self.sweep_kind!r}")
        if not self.sweep_values:
            raise ConfigError("empty sweep")
        for v in self.sweep_values:
            if self.sweep_kind == "budget" and not 0 < v <= 1:
                raise ConfigError(f"budget fraction {v} outside (0, 1]")
            if self.sweep_kind == "cardinality" and (int(v) != v or v < 1):
                raise ConfigError(f"cardinality cap {v} must be a positive integer")
        if self.instance.get("kind") not in ("maxcut", "movies", "file"):
            raise ConfigError(f"unknown instance kind {self.instance.get('kind')!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(data)


@dataclasses.dataclass
class BenchRecord:
    sweep_kind: str
    sweep_value: float
    algo: str
    repeat: int
    seed: int | None
    value: float
    oracle_calls: int
    wall_ms: float
    solution: tuple

    def row(self, timing: bool = False) -> list:
        return [self.sweep_kind, repr(self.sweep_value), self.algo, self.repeat,
                "" if self.seed is None else self.seed, repr(float(self.value)), self.oracle_calls,
                f"{self.wall_ms:.3f}" if timing else "", json.dumps(list(self.solution))]


def make_instance(spec: dict, sweep_kind: str, sweep_value) -> Instance:
    kind = spec["kind"]
    fraction = sweep_value if sweep_kind == "budget" else 1.0
    if kind == "maxcut":
        g = gen_er_graph(spec.get("n", 200), spec.get("p", 0.01), spec.get("seed", 0))
        cap = int(sweep_value) if sweep_kind == "cardinality" else spec.get("cap", 10)
        return build_maxcut_instance(g, cap, spec.get("degree_budget", 100.0), spec.get("digit_budget", 40.0),
                                     budget_fraction=fraction)
    if kind == "movies":
        if spec.get("csv"):
            rows = read_movies(spec["csv"])
        else:
            rows = synthetic_movies(spec.get("synthetic_n", 300), spec.get("dim", 8), spec.get("seed", 0))
        cap = int(sweep_value) if sweep_kind == "cardinality" else spec.get("total_cap", 10)
        return build_movie_instance(rows, spec.get("lambda", 4.0), spec.get("genre_cap", 2), cap,
                                    spec.get("rating_budget", 20.0), tuple(spec.get("year_budgets", (30.0, 30.0))),
                                    spec.get("third_knapsack", False), budget_fraction=fraction)
    if kind == "file":
        if sweep_kind != "budget":
            raise ConfigError("file instances support budget sweeps only")
        base = load_instance(spec["path"])
        return Instance(base.objective, base.matroids, base.knapsack.scaled(fraction), name=base.name)
    raise ConfigError(f"unknown instance kind {kind!r}")


def derive_seed(root: int, sweep_index: int, repeat: int) -> int:
    ss = np.random.SeedSequence(entropy=root, spawn_key=(sweep_index, repeat))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def run_algorithm(inst: Instance, algo: str, params: dict, seed: int | None = None):
    p = dict(params)
    shared = {k: p[k] for k in ("ell", "delta", "eps", "beta", "gamma") if k in p}
    if algo == "sprout":
        return sprout(inst, SproutParams(c_enum=p.get("c_enum", 1), **shared), jobs=p.get("inner_jobs", 1))
    if algo == "dssgs":
        return density_search_sgs(inst, SproutParams(**shared))
    if algo == "sproutpp":
        tc = p.get("tc")
        if tc is None and "tc_ratio" in p:
            tc = max(1, math.ceil(p["tc_ratio"] * inst.n))
        pp = SproutPPParams(t_counter=tc, alpha=p.get("alpha", 0.5), mu=p.get("mu", 1.0), seed=seed or 0, **shared)
        return sproutpp(inst, pp)
    if algo == "greedy":
        return greedy(inst)
    if algo == "rp_greedy":
        return repeated_greedy(inst, p.get("rounds", shared.get("ell", 2)))
    raise ConfigError(f"unknown algorithm {algo!r}")


def _run_point(args) -> list[BenchRecord]:
    cfg, si, value = args
    out = []
    for algo in cfg.algorithms:
        reps = cfg.repeats if algo in RANDOMIZED else 1
        for r in range(reps):
            seed = derive_seed(cfg.seed, si, r) if algo in RANDOMIZED else None
            inst = make_instance(cfg.instance, cfg.sweep_kind, value)
            rec = run_algorithm(inst, algo, cfg.params, seed)
            if not inst.is_feasible(rec.solution):
                raise SproutError(f"{algo} returned an infeasible set at {cfg.sweep_kind}={value}")
            log.info("%s=%s algo=%s repeat=%d value=%r calls=%d", cfg.sweep_kind, value, algo, r, rec.value,
                     rec.oracle_calls)
            out.append(BenchRecord(cfg.sweep_kind, value, algo, r, seed, rec.value, rec.oracle_calls,
                                   rec.wall_ms, rec.solution))
    return out


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> list[BenchRecord]:
    cfg.validate()
    tasks = [(cfg, si, v) for si, v in enumerate(cfg.sweep_values)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_point, tasks))
    else:
        chunks = [_run_point(t) for t in tasks]
    records = [(si, rec) for si, chunk in enumerate(chunks) for rec in chunk]
    records.sort(key=lambda x: (x[0], x[1].algo, x[1].repeat))
    return [rec for _, rec in records]


def records_to_csv(records, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.row(timing))
    return buf.getvalue()


def summarize(records) -> list[tuple]:
    """(sweep_value, algo, mean, std, count) per sweep point and algorithm."""
    groups = {}
    for rec in records:
        groups.setdefault((rec.sweep_value, rec.algo), []).append(rec.value)
    out = []
    for (value, algo), vals in groups.items():
        std = statistics.pstdev(vals) if len(vals) > 1 else 0.0
        out.append((value, algo, statistics.fmean(vals), std, len(vals)))
    return out


def format_summary(rows) -> str:
    lines = [f"{'sweep':>8}  {'algo':<10} {'mean':>12} {'std':>10} {'n':>3}"]
    for value, algo, mean, std, count in rows:
        lines.append(f"{value:>8.4g}  {algo:<10} {mean:>12.4f} {std:>10.4f} {count:>3}")
    return "\n".join(lines)
