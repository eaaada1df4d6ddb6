"""Submodular maximization under k-matroid and m-knapsack constraints."""

from .baselines import brute_force, density_search_sgs, greedy, repeated_greedy
from .core import (
    Instance,
    Knapsack,
    MatroidIntersection,
    ResultRecord,
    ValueOracle,
    contract_matroid,
    is_feasible,
    marginal_gain,
    reduce_knapsack,
)
from .objectives import (
    CoverageObjective,
    CutObjective,
    DiversityObjective,
    ModularObjective,
    PartitionMatroid,
    UniformMatroid,
    WeightedGraph,
    build_matroid,
)
from .sgs import SgsParams, knapsack_sgs
from .sprout import SproutParams, sprout, theory_params
from .sproutpp import SproutPPParams, sproutpp

__version__ = "0.1.0"
