"""Objective functions and matroid families used by the experiments."""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import Matroid, ParamError, SproutError, as_set, sorted_ids


class SpecError(SproutError, ValueError):
    pass


# ---------------------------------------------------------------------------
# graphs and the weighted cut


@dataclasses.dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple  # ((u, v, w), ...)

    def __post_init__(self):
        seen = set()
        clean = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise SpecError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise SpecError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            if w < 0:
                raise SpecError(f"negative weight on edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise SpecError(f"duplicate edge {key}")
            seen.add(key)
            clean.append((u, v, w))
        object.__setattr__(self, "edges", tuple(clean))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def weighted_cut(S, g: WeightedGraph) -> float:
    """Total weight of edges with exactly one endpoint in S."""
    S = as_set(S)
    return float(sum(w for u, v, w in g.edges if (u in S) != (v in S)))


class CutObjective:
    """f(S) = sum of w(u, v) over u in S, v outside S."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.n = graph.n
        self.adj = [dict() for _ in range(self.n)]
        for u, v, w in graph.edges:
            self.adj[u][v] = w
            self.adj[v][u] = w
        self.wdeg = np.array([sum(a.values()) for a in self.adj], dtype=float)

    def value(self, S) -> float:
        total = 0.0
        for u in S:
            for v, w in self.adj[u].items():
                if v not in S:
                    total += w
        return total

    def gain(self, S, e: int) -> float:
        inside = 0.0
        for v, w in self.adj[e].items():
            if v in S:
                inside += w
        return float(self.wdeg[e] - 2.0 * inside)


# ---------------------------------------------------------------------------
# diversity


def similarity_from_features(vectors, lam: float) -> np.ndarray:
    """s_ij = exp(-lam * ||v_i - v_j||_2)."""
    X = np.asarray(vectors, dtype=float)
    if X.ndim != 2:
        raise SpecError("feature vectors must all have the same dimension")
    if lam <= 0:
        raise ParamError("lambda must be positive")
    sq = np.sum(X * X, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
    dist = np.sqrt(np.clip(d2, 0.0, None))
    np.fill_diagonal(dist, 0.0)
    s = np.exp(-lam * dist)
    return (s + s.T) / 2.0


def diversity_objective(S, sim) -> float:
    """(sum_{i in N, j in S} s_ij - sum_{i, j in S} s_ij) / n, straight from the definition."""
    sim = np.asarray(sim, dtype=float)
    n = sim.shape[0]
    idx = sorted_ids(S)
    if not idx:
        return 0.0
    return float((sim[:, idx].sum() - sim[np.ix_(idx, idx)].sum()) / n)


class DiversityObjective:
    def __init__(self, sim):
        sim = np.array(sim, dtype=float)
        if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
            raise SpecError("similarity matrix must be square")
        if not np.allclose(sim, sim.T):
            raise SpecError("similarity matrix must be symmetric")
        if np.any(sim < 0):
            raise SpecError("similarities must be non-negative")
        sim.setflags(write=False)
        self.sim = sim
        self.n = sim.shape[0]
        self.colsum = sim.sum(axis=0)

    def value(self, S) -> float:
        if not S:
            return 0.0
        idx = list(S)
        v = self.colsum[idx].sum() - self.sim[np.ix_(idx, idx)].sum()
        return max(float(v) / self.n, 0.0)

    def gain(self, S, e: int) -> float:
        row = self.sim[e]
        inside = row[list(S)].sum() if S else 0.0
        return float(self.colsum[e] - row[e] - 2.0 * inside) / self.n


# ---------------------------------------------------------------------------
# monotone objectives


class ModularObjective:
    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise SpecError("modular weights must be non-negative")
        self.weights = w
        self.n = len(w)

    def value(self, S) -> float:
        return float(sum(self.weights[e] for e in S))

    def gain(self, S, e: int) -> float:
        return float(self.weights[e])


class CoverageObjective:
    """Weighted coverage: f(S) = weight of the union of the items covered by S."""

    def __init__(self, covers: Sequence, item_weights):
        self.covers = [frozenset(int(x) for x in c) for c in covers]
        self.item_weights = np.asarray(item_weights, dtype=float)
        if np.any(self.item_weights < 0):
            raise SpecError("item weights must be non-negative")
        for c in self.covers:
            if any(not 0 <= x < len(self.item_weights) for x in c):
                raise SpecError("cover references an unknown item")
        self.n = len(self.covers)

    def _covered(self, S) -> set:
        out = set()
        for e in S:
            out |= self.covers[e]
        return out

    def value(self, S) -> float:
        return float(sum(self.item_weights[x] for x in self._covered(S)))

    def gain(self, S, e: int) -> float:
        new = self.covers[e] - self._covered(S)
        return float(sum(self.item_weights[x] for x in new))


# ---------------------------------------------------------------------------
# matroid families


@dataclasses.dataclass(frozen=True)
class UniformMatroidSpec:
    cap: int


@dataclasses.dataclass(frozen=True)
class PartitionMatroidSpec:
    parts: tuple
    caps: tuple


class UniformMatroid(Matroid):
    def __init__(self, cap: int):
        if cap < 0:
            raise SpecError("uniform matroid capacity must be non-negative")
        self.cap = int(cap)

    def is_independent(self, S) -> bool:
        return len(S) <= self.cap

    def __repr__(self):
        return f"UniformMatroid(cap={self.cap})"


class PartitionMatroid(Matroid):
    """|S & part_g| <= cap_g for every part; elements outside all parts are free."""

    def __init__(self, parts, caps):
        parts = [tuple(sorted(int(e) for e in p)) for p in parts]
        caps = [int(c) for c in caps]
        if len(parts) != len(caps):
            raise SpecError("partition matroid needs one cap per part")
        if any(c < 0 for c in caps):
            raise SpecError("partition caps must be non-negative")
        owner = {}
        for g, p in enumerate(parts):
            for e in p:
                if e in owner:
                    raise SpecError(f"element {e} appears in parts {owner[e]} and {g}")
                owner[e] = g
        self.parts = parts
        self.caps = caps
        self.owner = owner

    def is_independent(self, S) -> bool:
        counts = {}
        for e in S:
            g = self.owner.get(e)
            if g is None:
                continue
            c = counts.get(g, 0) + 1
            if c > self.caps[g]:
                return False
            counts[g] = c
        return True

    def __repr__(self):
        return f"PartitionMatroid(parts={self.parts}, caps={self.caps})"


def build_matroid(spec) -> Matroid:
    if isinstance(spec, UniformMatroidSpec):
        return UniformMatroid(spec.cap)
    if isinstance(spec, PartitionMatroidSpec):
        return PartitionMatroid(spec.parts, spec.caps)
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "uniform":
            return UniformMatroid(spec["cap"])
        if kind == "partition":
            return PartitionMatroid(spec["parts"], spec["caps"])
        raise SpecError(f"unknown matroid kind {kind!r}")
    raise SpecError(f"cannot build a matroid from {spec!r}")


def matroid_to_dict(M: Matroid) -> dict:
    if isinstance(M, UniformMatroid):
        return {"kind": "uniform", "cap": M.cap}
    if isinstance(M, PartitionMatroid):
        return {"kind": "partition", "parts": [list(p) for p in M.parts], "caps": list(M.caps)}
    raise SpecError(f"matroid {M!r} has no file representation")


# ---------------------------------------------------------------------------
# graph files


def graph_text(g: WeightedGraph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def write_graph(g: WeightedGraph, path) -> None:
    Path(path).write_text(graph_text(g))


def read_graph(path) -> WeightedGraph:
    n = None
    edges = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "n" or len(parts) != 2:
                raise SpecError(f"{path}:{lineno}: expected header 'n <int>'")
            n = int(parts[1])
            continue
        if len(parts) != 3:
            raise SpecError(f"{path}:{lineno}: expected 'u v weight'")
        edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
    if n is None:
        raise SpecError(f"{path}: missing header")
    return WeightedGraph(n, tuple(edges))

