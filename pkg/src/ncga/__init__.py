"""Genetic minimization of network-coding links for multicast."""

from .baselines import BaselineResult, exhaustive_min, minimal_linkstate, minimal_subgraph
from .engine import GaConfig, RunResult, greedy_sweep, run_ga, tournament_select
from .feasibility import INFEASIBLE, BudgetExhausted, EvalCounter, Evaluator, Fitness, evaluate, max_flow
from .layout import (BlockLayout, FlowGraph, build_layout, decompose, format_genotype,
                     parse_genotype, search_space_log10)
from .netgraph import (GeneratorParams, Network, NetworkError, NetworkFormatError, make_canonical,
                       make_cascade, make_random_acyclic, parse_network, serialize_network)
from .operators import (OperatorConfig, bts_states, crossover, init_population, is_bts_valid,
                        mutate)

__all__ = [
    "BaselineResult", "BlockLayout", "BudgetExhausted", "EvalCounter", "Evaluator", "FlowGraph",
    "Fitness", "GaConfig", "GeneratorParams", "INFEASIBLE", "Network", "NetworkError",
    "NetworkFormatError", "OperatorConfig", "RunResult", "bts_states", "build_layout", "crossover",
    "decompose", "evaluate", "exhaustive_min", "format_genotype", "greedy_sweep", "init_population",
    "is_bts_valid", "make_canonical", "make_cascade", "make_random_acyclic", "max_flow",
    "minimal_linkstate", "minimal_subgraph", "mutate", "parse_genotype", "parse_network",
    "run_ga", "search_space_log10", "serialize_network", "tournament_select",
]
