"""Problem instances: value oracles, matroids, knapsacks and feasibility."""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

import numpy as np

FEAS_TOL = 1e-9


class SproutError(Exception):
    """Base class for errors raised by this package."""


class ParamError(SproutError, ValueError):
    pass


class ContractError(SproutError):
    """Contraction by a set that is not independent."""


class ReductionError(SproutError):
    """A seed set uses up (at least) a whole knapsack budget."""


class EmptyInstanceError(SproutError):
    """No feasible single element exists."""


class SizeError(SproutError):
    """Exhaustive search refused because the instance is too large."""


def as_set(S: Iterable[int]) -> frozenset:
    return S if isinstance(S, frozenset) else frozenset(S)


def sorted_ids(S: Iterable[int]) -> list[int]:
    return sorted(int(e) for e in S)


# ---------------------------------------------------------------------------
# value oracle


class ValueOracle:
    """Counting wrapper around an objective.

    The objective must expose ``n``, ``value(S)`` and ``gain(S, e)``; the
    latter returns ``f(S | {e}) - f(S)``.  Every ``evaluate`` counts as one
    oracle call.  ``gain`` also counts as one call: it stands for evaluating
    ``f(S | {e})`` when the caller already holds ``f(S)``.
    """

    def __init__(self, objective):
        self.objective = objective
        self.n = objective.n
        self.call_count = 0

    def _check(self, e):
        if not 0 <= e < self.n:
            raise IndexError(f"element {e} outside ground set of size {self.n}")

    def evaluate(self, S) -> float:
        self.call_count += 1
        return self.objective.value(as_set(S))

    def gain(self, base, e: int) -> float:
        self._check(e)
        self.call_count += 1
        base = as_set(base)
        if e in base:
            return 0.0
        return self.objective.gain(base, e)

    def fork(self) -> "ValueOracle":
        """Fresh counter over the same (immutable) objective."""
        return ValueOracle(self.objective)

    def __getstate__(self):
        return {"objective": self.objective, "n": self.n, "call_count": self.call_count}

    def __setstate__(self, state):
        self.__dict__.update(state)


def marginal_gain(oracle: ValueOracle, base, e: int, base_value: float | None = None) -> float:
    """f(base + e) - f(base) by direct evaluation.

    Costs two oracle calls, or one when ``base_value`` is supplied.
    """
    oracle._check(e)
    base = as_set(base)
    if base_value is None:
        base_value = oracle.evaluate(base)
    return oracle.evaluate(base | {e}) - base_value


class Residual:
    """z_A(S) = f(S | A) - f(A) on top of a counting oracle."""

    def __init__(self, oracle: ValueOracle, A, f_A: float | None = None):
        self.oracle = oracle
        self.A = as_set(A)
        self.f_A = oracle.evaluate(self.A) if f_A is None else f_A

    def value(self, S) -> float:
        return self.oracle.evaluate(as_set(S) | self.A) - self.f_A

    def gain(self, S, e: int) -> float:
        if e in self.A:
            return 0.0
        return self.oracle.gain(as_set(S) | self.A, e)


# ---------------------------------------------------------------------------
# matroids


class Matroid:
    """Independence oracle.  Subclasses implement ``is_independent``."""

    def is_independent(self, S) -> bool:
        raise NotImplementedError

    def contract(self, A) -> "Matroid":
        return contract_matroid(self, A)


class ContractedMatroid(Matroid):
    """Lazy contraction: S is independent iff S | A is independent in the parent."""

    def __init__(self, parent: Matroid, A):
        self.parent = parent
        self.A = as_set(A)

    def is_independent(self, S) -> bool:
        return self.parent.is_independent(as_set(S) | self.A)

    def __repr__(self):
        return f"ContractedMatroid({self.parent!r}, {sorted_ids(self.A)})"


class MatroidIntersection(Matroid):
    def __init__(self, members: Sequence[Matroid]):
        members = list(members)
        if not members:
            raise ParamError("a matroid intersection needs at least one member")
        self.members = members

    @property
    def k(self) -> int:
        return len(self.members)

    def is_independent(self, S) -> bool:
        S = as_set(S)
        return all(M.is_independent(S) for M in self.members)

    def contract(self, A) -> "MatroidIntersection":
        return MatroidIntersection([contract_matroid(M, A) for M in self.members])

    def __repr__(self):
        return f"MatroidIntersection({self.members!r})"


def contract_matroid(M: Matroid, A) -> Matroid:
    A = as_set(A)
    if not M.is_independent(A):
        raise ContractError(f"cannot contract by dependent set {sorted_ids(A)}")
    if not A:
        return M
    if isinstance(M, MatroidIntersection):
        return M.contract(A)
    if isinstance(M, ContractedMatroid):
        return ContractedMatroid(M.parent, M.A | A)
    return ContractedMatroid(M, A)


# ---------------------------------------------------------------------------
# knapsacks


@dataclasses.dataclass(frozen=True)
class Knapsack:
    """m modular cost rows over n elements with one budget per row."""

    costs: np.ndarray
    budgets: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim == 1 and costs.size == 0:
            costs = costs.reshape(0, 0)
        if costs.ndim != 2:
            raise ParamError("knapsack costs must be an m x n matrix")
        budgets = np.asarray(self.budgets, dtype=float).reshape(-1)
        if budgets.shape[0] != costs.shape[0]:
            raise ParamError("one budget per knapsack row is required")
        if np.any(costs < 0):
            raise ParamError("knapsack costs must be non-negative")
        if np.any(budgets <= 0):
            raise ParamError("knapsack budgets must be positive")
        costs.setflags(write=False)
        budgets.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "budgets", budgets)

    @classmethod
    def empty(cls, n: int) -> "Knapsack":
        return cls(np.zeros((0, n)), np.zeros(0))

    @property
    def m(self) -> int:
        return self.costs.shape[0]

    @property
    def n(self) -> int:
        return self.costs.shape[1]

    def cost(self, S) -> np.ndarray:
        idx = sorted_ids(S)
        if not idx:
            return np.zeros(self.m)
        return self.costs[:, idx].sum(axis=1)

    def is_feasible(self, S, tol: float = FEAS_TOL) -> bool:
        return bool(np.all(self.cost(S) <= self.budgets + tol))

    def normalized(self) -> "Knapsack":
        return Knapsack(self.costs / self.budgets[:, None], np.ones(self.m))

    def scaled(self, fraction: float) -> "Knapsack":
        return Knapsack(self.costs, self.budgets * fraction)

    def reduce(self, A) -> "Knapsack":
        """Budgets minus c(A), renormalised to one."""
        used = self.cost(A)
        left = self.budgets - used
        if np.any(left <= 0):
            raise ReductionError(f"seed {sorted_ids(A)} exhausts a knapsack budget")
        return Knapsack(self.costs / left[:, None], np.ones(self.m))


def reduce_knapsack(K: Knapsack, A) -> Knapsack:
    return K.reduce(A)


# ---------------------------------------------------------------------------
# instances


@dataclasses.dataclass
class Instance:
    """Objective + k matroids + m knapsack rows.  Budgets are normalised to 1."""

    objective: object
    matroids: MatroidIntersection
    knapsack: Knapsack
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.matroids, MatroidIntersection):
            self.matroids = MatroidIntersection(list(self.matroids))
        if self.knapsack.n != self.objective.n and self.knapsack.m > 0:
            raise ParamError("knapsack width does not match ground-set size")
        if self.knapsack.m == 0:
            self.knapsack = Knapsack.empty(self.objective.n)
        self.knapsack = self.knapsack.normalized()
        self.oracle = ValueOracle(self.objective)
        self._singletons = None

    @property
    def n(self) -> int:
        return self.objective.n

    @property
    def k(self) -> int:
        return self.matroids.k

    @property
    def m(self) -> int:
        return self.knapsack.m

    def is_feasible(self, S) -> bool:
        S = as_set(S)
        return self.matroids.is_independent(S) and self.knapsack.is_feasible(S)

    def feasible_singletons(self) -> list[int]:
        """Elements e with {e} feasible; everything else can never be chosen."""
        if self._singletons is None:
            self._singletons = [e for e in range(self.n) if self.is_feasible((e,))]
        return list(self._singletons)

    def value(self, S) -> float:
        """Uncounted objective value, for reporting and audits."""
        return self.objective.value(as_set(S))

    def fresh(self) -> "Instance":
        """Same instance with a zeroed call counter."""
        inst = dataclasses.replace(self)
        inst._singletons = self._singletons
        return inst

    def __getstate__(self):
        return self.__dict__.copy()


def is_feasible(inst: Instance, S) -> bool:
    return inst.is_feasible(S)


@dataclasses.dataclass
class TheoryBounds:
    opt_value: float
    opt_size: int


@dataclasses.dataclass
class ResultRecord:
    algo: str
    solution: tuple
    value: float
    oracle_calls: int
    wall_ms: float
    seed: int | None = None
    extra: dict = dataclasses.field(default_factory=dict)
    info: dict = dataclasses.field(default_factory=dict, repr=False, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "algo": self.algo,
            "value": float(self.value),
            "set": [int(e) for e in self.solution],
            "oracle_calls": int(self.oracle_calls),
            "wall_ms": float(self.wall_ms) if timing else None,
            "seed": self.seed,
        }
        out.update(self.extra)
        return out
