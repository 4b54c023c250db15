"""Fair rank aggregation under the Kendall tau distance."""

from .aggregate import AggregatorChoice, best_from_input, exact_aggregate, fair_aggregate, kwiksort
from .bipartition import Bipartition, TooLarge, bipartition_oracle, col_bipartition, cut_cost
from .closest_fair import closest_fair_oracle, closest_fair_ranking
from .core import (
    FairnessSpec, GroupedUniverse, InfeasibleSpec, Instance, InvalidInput, Ranking,
    WeightedRankingSet, concat, is_fair, kendall_tau, kendall_tau_blocks, objective,
    restrict, weighted_objective,
)
from .generic import FastConfig, build_coreset, generic_fair_ra, generic_fair_ra_fast
from .harness import TightParams, exact_fair_opt, gen_random, gen_tight
from .tournament import CountTournament, build_tournament, majority_tournament

__version__ = "0.1.0"

__all__ = [
    "AggregatorChoice", "Bipartition", "CountTournament", "FairnessSpec", "FastConfig",
    "GroupedUniverse", "InfeasibleSpec", "Instance", "InvalidInput", "Ranking", "TightParams",
    "TooLarge", "WeightedRankingSet", "best_from_input", "bipartition_oracle", "build_coreset",
    "build_tournament", "closest_fair_oracle", "closest_fair_ranking", "col_bipartition",
    "concat", "cut_cost", "exact_aggregate", "exact_fair_opt", "fair_aggregate", "gen_random",
    "gen_tight", "generic_fair_ra", "generic_fair_ra_fast", "is_fair", "kendall_tau",
    "kendall_tau_blocks", "kwiksort", "majority_tournament", "objective", "restrict",
    "weighted_objective",
]
