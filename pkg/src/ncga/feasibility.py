"""Fitness of link-state genotypes.

A genotype is feasible when every sink still receives ``rate`` unit flows in
the decomposed graph.  Feasible genotypes score the number of blocks with two
or more active inputs (coding links); infeasible ones rank above every
feasible score.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache, total_ordering

import numpy as np

from .flow import GatedGraph, _fitness_rows
from .layout import BlockLayout, FlowGraph, gated_decomposition
from .netgraph import Network


@total_ordering
@dataclass(frozen=True)
class Fitness:
    coding_blocks: int | None

    @classmethod
    def feasible(cls, coding_blocks: int) -> "Fitness":
        if coding_blocks < 0:
            raise ValueError("coding block count must be nonnegative")
        return cls(int(coding_blocks))

    @property
    def is_feasible(self) -> bool:
        return self.coding_blocks is not None

    def _key(self):
        return (1, 0) if self.coding_blocks is None else (0, self.coding_blocks)

    def __lt__(self, other):
        if not isinstance(other, Fitness):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self):
        return "inf" if self.coding_blocks is None else str(self.coding_blocks)


INFEASIBLE = Fitness(None)


class BudgetExhausted(RuntimeError):
    pass


class EvalCounter:
    """Counts fitness evaluations against a fixed budget (thread-safe)."""

    def __init__(self, budget: int, used: int = 0):
        if budget < 1:
            raise ValueError("budget must be positive")
        self.budget = budget
        self.used = used
        self._lock = threading.Lock()

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def charge(self, n: int = 1) -> None:
        with self._lock:
            if self.used + n > self.budget:
                raise BudgetExhausted(f"{self.used} + {n} evaluations exceed budget {self.budget}")
            self.used += n


def max_flow(flowgraph: FlowGraph, source: int, target: int) -> int:
    """Exact max-flow between two nodes of a unit-capacity flow graph."""
    n = flowgraph.node_count
    for node in (source, target):
        if not 0 <= node < n:
            raise ValueError(f"unknown node id {node}")
    graph = GatedGraph(n, flowgraph.tails, flowgraph.heads, np.full(len(flowgraph.tails), -1),
                       flowgraph.source, np.array(list(flowgraph.terminals.values())))
    return graph.flow(np.zeros(0, dtype=np.uint8), source, target)


class Evaluator:
    """Compiled feasibility test for one network and layout.

    Holds the decomposed graph with every genotype-controlled arc gated, so a
    genotype evaluation only reloads residual capacities.
    """

    def __init__(self, network: Network, layout: BlockLayout):
        self.network = network
        self.layout = layout
        self.graph, self.labels = gated_decomposition(network, layout)
        self._offsets = layout.block_offsets
        self._lengths = layout.block_lengths
        # Infeasible rows are reported as this value in integer arrays.
        self.infeasible_value = layout.block_count + 1

    def fitness_array(self, pop) -> np.ndarray:
        """Coding-block counts for each row; infeasible rows get ``infeasible_value``."""
        pop = np.ascontiguousarray(np.atleast_2d(pop), dtype=np.uint8)
        if pop.shape[1] != self.layout.genotype_length:
            raise ValueError(
                f"genotype length {pop.shape[1]} does not match layout length "
                f"{self.layout.genotype_length}"
            )
        g = self.graph
        raw = _fitness_rows(pop, g.adj_start, g.adj_slot, g.slot_to, g.gate, g.source,
                            g.terminals, self.network.rate, self._offsets, self._lengths)
        raw[raw < 0] = self.infeasible_value
        return raw

    def is_feasible(self, genotype) -> bool:
        return bool(self.fitness_array(genotype)[0] < self.infeasible_value)

    def fitness(self, genotype) -> Fitness:
        value = int(self.fitness_array(genotype)[0])
        return INFEASIBLE if value == self.infeasible_value else Fitness(value)

    def sink_flows(self, genotype) -> dict[int, int]:
        """Uncapped max-flow from the source to each sink terminal."""
        bits = np.ascontiguousarray(genotype, dtype=np.uint8)
        return {t: self.graph.flow(bits, self.graph.source, int(star))
                for t, star in zip(self.network.sinks, self.graph.terminals)}


@lru_cache(maxsize=32)
def evaluator_for(network: Network, layout: BlockLayout) -> Evaluator:
    return Evaluator(network, layout)


def evaluate(network: Network, layout: BlockLayout, genotype, counter: EvalCounter) -> Fitness:
    """Fitness of one genotype, charged to ``counter``."""
    if counter.remaining <= 0:
        raise BudgetExhausted(f"budget of {counter.budget} evaluations exhausted")
    result = evaluator_for(network, layout).fitness(genotype)
    counter.charge(1)
    return result
