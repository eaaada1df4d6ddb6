"""Instance files (JSON) and the movie CSV."""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path

import numpy as np

from .core import Instance, Knapsack, MatroidIntersection, SproutError
from .objectives import (
    CoverageObjective,
    CutObjective,
    DiversityObjective,
    ModularObjective,
    SpecError,
    WeightedGraph,
    build_matroid,
    matroid_to_dict,
    similarity_from_features,
)


class InstanceFormatError(SproutError, ValueError):
    pass


def objective_from_dict(n: int, spec: dict):
    kind = spec.get("kind")
    if kind == "cut":
        return CutObjective(WeightedGraph(n, tuple(tuple(e) for e in spec["edges"])))
    if kind == "diversity":
        if "similarity" in spec:
            sim = np.asarray(spec["similarity"], dtype=float)
        else:
            sim = similarity_from_features(spec["features"], spec.get("lambda", 4.0))
        if sim.shape != (n, n):
            raise InstanceFormatError(f"similarity matrix is {sim.shape}, expected ({n}, {n})")
        return DiversityObjective(sim)
    if kind == "modular":
        obj = ModularObjective(spec["weights"])
    elif kind == "coverage":
        obj = CoverageObjective(spec["covers"], spec["item_weights"])
    else:
        raise InstanceFormatError(f"unknown objective kind {kind!r}")
    if obj.n != n:
        raise InstanceFormatError(f"objective covers {obj.n} elements, expected {n}")
    return obj


def objective_to_dict(obj) -> dict:
    if isinstance(obj, CutObjective):
        return {"kind": "cut", "edges": [[u, v, w] for u, v, w in obj.graph.edges]}
    if isinstance(obj, DiversityObjective):
        return {"kind": "diversity", "similarity": obj.sim.tolist()}
    if isinstance(obj, ModularObjective):
        return {"kind": "modular", "weights": obj.weights.tolist()}
    if isinstance(obj, CoverageObjective):
        return {"kind": "coverage", "covers": [sorted(c) for c in obj.covers],
                "item_weights": obj.item_weights.tolist()}
    raise InstanceFormatError(f"objective {type(obj).__name__} has no file representation")


def instance_from_dict(data: dict, name: str = "") -> Instance:
    try:
        n = int(data["n"])
        obj = objective_from_dict(n, data["objective"])
        matroids = [build_matroid(m) for m in data.get("matroids", [])]
        if not matroids:
            matroids = [build_matroid({"kind": "uniform", "cap": n})]
        ks = data.get("knapsacks") or {"costs": [], "budgets": []}
        costs = np.asarray(ks["costs"], dtype=float)
        if costs.size == 0:
            knap = Knapsack.empty(n)
        else:
            knap = Knapsack(costs.reshape(len(ks["budgets"]), n), ks["budgets"])
    except (KeyError, TypeError, ValueError, SpecError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"malformed instance: {exc}") from exc
    return Instance(obj, MatroidIntersection(matroids), knap, name=name)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "objective": objective_to_dict(inst.objective),
        "matroids": [matroid_to_dict(M) for M in inst.matroids.members],
        "knapsacks": {"costs": inst.knapsack.costs.tolist(), "budgets": inst.knapsack.budgets.tolist()},
    }


def load_instance(path) -> Instance:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    return instance_from_dict(data, name=path.stem)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")


# ---------------------------------------------------------------------------
# movies


@dataclasses.dataclass(frozen=True)
class MovieRow:
    id: str
    rating: float
    year: int
    genres: tuple
    features: tuple


def read_movies(path) -> list[MovieRow]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = {"id", "rating", "year", "genres"} - set(fields)
        if missing:
            raise InstanceFormatError(f"{path}: missing columns {sorted(missing)}")
        fcols = sorted((c for c in fields if c.startswith("f") and c[1:].isdigit()), key=lambda c: int(c[1:]))
        if not fcols:
            raise InstanceFormatError(f"{path}: no feature columns f1..fd")
        for lineno, rec in enumerate(reader, 2):
            try:
                rating = float(rec["rating"])
                if not 0 <= rating <= 10:
                    raise ValueError(f"rating {rating} outside [0, 10]")
                genres = tuple(g for g in rec["genres"].split(";") if g)
                row = MovieRow(rec["id"], rating, int(rec["year"]), genres,
                               tuple(float(rec[c]) for c in fcols))
            except (TypeError, ValueError) as exc:
                raise InstanceFormatError(f"{path}: row {lineno}: {exc}") from exc
            rows.append(row)
    return rows


def write_movies(rows, path) -> None:
    d = len(rows[0].features) if rows else 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "rating", "year", "genres"] + [f"f{i + 1}" for i in range(d)])
        for r in rows:
            w.writerow([r.id, repr(r.rating), r.year, ";".join(r.genres)] + [repr(x) for x in r.features])
