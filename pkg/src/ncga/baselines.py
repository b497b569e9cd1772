"""Reference algorithms: minimal-subgraph pruning, random-order link-state
pruning, and an exhaustive minimum over the transmission-state space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import _sweep
from .feasibility import Evaluator
from .flow import GatedGraph
from .layout import build_layout
from .netgraph import Network, NetworkError
from .operators import _state_bits


@dataclass(frozen=True, eq=False)
class BaselineResult:
    coding_link_count: int
    seed: int | None
    artifact: object
    evaluations: int = 0


def _edge_graph(network: Network) -> GatedGraph:
    return GatedGraph.from_network_edges(network.node_count, network.edges, network.source,
                                         network.sinks)


def achievable(network: Network) -> bool:
    mask = np.ones(len(network.edges), dtype=np.uint8)
    return _edge_graph(network).min_terminal_flow(mask, network.rate) >= network.rate


def minimal_subgraph(network: Network, rng) -> BaselineResult:
    """Minimal 1: random-order edge removal down to a minimal rate-``R`` subgraph.

    The coding-link count is then taken on the pruned network: the fitness
    of an ascending-order greedy sweep started from all-one on its layout.
    """
    graph = _edge_graph(network)
    mask = np.ones(len(network.edges), dtype=np.uint8)
    if graph.min_terminal_flow(mask, network.rate) < network.rate:
        raise NetworkError("rate is not achievable on the full network")
    evaluations = 0
    changed = True
    while changed:
        changed = False
        for e in rng.permutation(len(network.edges)):
            if not mask[e]:
                continue
            mask[e] = 0
            evaluations += 1
            if graph.min_terminal_flow(mask, network.rate) >= network.rate:
                changed = True
            else:
                mask[e] = 1
    kept = tuple(int(e) for e in np.flatnonzero(mask))
    sub = network.without_edges(np.flatnonzero(mask == 0))
    layout = build_layout(sub)
    evaluator = Evaluator(sub, layout)
    swept, sweep_evals = _sweep(evaluator, layout.all_ones())
    count = evaluator.fitness(swept).coding_blocks
    return BaselineResult(count, None, kept, evaluations + sweep_evals)


def minimal_linkstate(network: Network, rng) -> BaselineResult:
    """Minimal 2: greedy sweep of the all-one genotype in a random bit order."""
    layout = build_layout(network)
    evaluator = Evaluator(network, layout)
    all_one = layout.all_ones()
    if not evaluator.is_feasible(all_one):
        raise NetworkError("rate is not achievable on the full network")
    swept, evaluations = _sweep(evaluator, all_one, rng.permutation(layout.genotype_length))
    return BaselineResult(evaluator.fitness(swept).coding_blocks, None, swept, evaluations)


class SearchSpaceTooLarge(ValueError):
    pass


def exhaustive_min(network: Network, cap: int = 10**7, chunk: int = 1 << 15) -> int:
    """Minimum coding-link count over every transmission-state genotype.

    A feasible block with two or more active inputs stays feasible, at equal
    cost, when saturated to all-one, so the minimum over this reduced space
    equals the minimum over all bit strings.
    """
    layout = build_layout(network)
    evaluator = Evaluator(network, layout)
    radices = layout.block_lengths + 2
    total = 1
    for r in radices:
        total *= int(r)
        if total > cap:
            raise SearchSpaceTooLarge(f"search space exceeds cap {cap}")
    best = evaluator.infeasible_value
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total), dtype=np.int64)
        states = np.empty((index.size, layout.block_count), dtype=np.int64)
        for b in range(layout.block_count - 1, -1, -1):
            index, states[:, b] = np.divmod(index, radices[b])
        best = min(best, int(evaluator.fitness_array(_state_bits(layout, states)).min()))
        if best == 0:
            break
    if best >= evaluator.infeasible_value:
        raise NetworkError("no feasible genotype: rate is not achievable")
    return best
