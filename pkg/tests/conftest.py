import itertools

import numpy as np
import pytest

from sproutkit.core import Instance, Knapsack, MatroidIntersection
from sproutkit.objectives import (
    CoverageObjective,
    CutObjective,
    DiversityObjective,
    PartitionMatroid,
    UniformMatroid,
    WeightedGraph,
    similarity_from_features,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def triangle_graph():
    # node 0 is isolated so that the triangle keeps the 1-based labels
    return WeightedGraph(4, ((1, 2, 1.0), (1, 3, 2.0), (2, 3, 3.0)))


def random_graph(n, p, rng):
    edges = [(u, v, float(rng.random())) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return WeightedGraph(n, tuple(edges))


def random_partition(n, rng, groups=3):
    labels = rng.integers(0, groups, n)
    parts = [[e for e in range(n) if labels[e] == g] for g in range(groups)]
    caps = [int(c) for c in rng.integers(1, 3, groups)]
    return PartitionMatroid(parts, caps)


def random_knapsack(n, m, rng, budget=1.0):
    return Knapsack(rng.random((m, n)) * 0.6, np.full(m, budget))


def random_objective(kind, n, rng):
    if kind == "cut":
        return CutObjective(random_graph(n, 0.5, rng))
    if kind == "diversity":
        return DiversityObjective(similarity_from_features(rng.normal(size=(n, 3)), 1.0))
    if kind == "coverage":
        items = 2 * n
        covers = [rng.choice(items, size=int(rng.integers(1, 5)), replace=False).tolist() for _ in range(n)]
        return CoverageObjective(covers, rng.random(items))
    raise ValueError(kind)


def random_instance(n, rng, kind="cut", k=1, m=1):
    obj = random_objective(kind, n, rng)
    matroids = [UniformMatroid(int(rng.integers(2, 5)))]
    if k >= 2:
        matroids.append(random_partition(n, rng))
    return Instance(obj, MatroidIntersection(matroids), random_knapsack(n, m, rng))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
