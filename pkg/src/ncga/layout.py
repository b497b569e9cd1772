"""Block layout of link-state variables and the decomposed flow graph.

A merging node (in-degree >= 2) owns one block per outgoing edge; the block
holds one bit per incoming edge, set when that input is passed on to the
outgoing edge.  Blocks are ordered by (node id, outgoing edge id) and the bits
inside a block by incoming edge id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .flow import GatedGraph
from .netgraph import Network


@dataclass(frozen=True)
class Block:
    node: int
    out_edge: int
    in_edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.in_edges)


@dataclass(frozen=True)
class BlockLayout:
    blocks: tuple[Block, ...]

    @cached_property
    def block_lengths(self) -> np.ndarray:
        return np.array([b.length for b in self.blocks], dtype=np.int64)

    @cached_property
    def block_offsets(self) -> np.ndarray:
        offsets = np.zeros(len(self.blocks), dtype=np.int64)
        if len(self.blocks) > 1:
            np.cumsum(self.block_lengths[:-1], out=offsets[1:])
        return offsets

    @property
    def genotype_length(self) -> int:
        return int(self.block_lengths.sum())

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_of_bit(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.blocks)), self.block_lengths)

    @cached_property
    def position_of_bit(self) -> np.ndarray:
        """Index of each bit inside its block."""
        return np.arange(self.genotype_length) - self.block_offsets[self.block_of_bit]

    @cached_property
    def bit_index(self) -> dict[tuple[int, int, int], int]:
        """(node, incoming edge, outgoing edge) -> bit position."""
        index = {}
        for block, offset in zip(self.blocks, self.block_offsets):
            for j, e in enumerate(block.in_edges):
                index[(block.node, e, block.out_edge)] = int(offset) + j
        return index

    def all_ones(self) -> np.ndarray:
        return np.ones(self.genotype_length, dtype=np.uint8)

    def split(self, genotype) -> list[np.ndarray]:
        genotype = np.asarray(genotype)
        return [genotype[o : o + k] for o, k in zip(self.block_offsets, self.block_lengths)]


def merging_nodes(network: Network) -> list[int]:
    """Nodes with two or more inputs; the source never codes."""
    return [
        v for v in range(network.node_count)
        if len(network.in_edges[v]) >= 2 and v != network.source
    ]


def build_layout(network: Network) -> BlockLayout:
    blocks = []
    for v in merging_nodes(network):
        for f in network.out_edges[v]:
            blocks.append(Block(v, f, network.in_edges[v]))
    return BlockLayout(tuple(blocks))


def search_space_log10(layout: BlockLayout) -> tuple[float, float]:
    """log10 of the search-space size under (BLS, BTS) encodings."""
    bls = layout.genotype_length * math.log10(2)
    bts = float(sum(math.log10(k + 2) for k in layout.block_lengths))
    return bls, bts


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True, eq=False)
class FlowGraph:
    """Decomposed network with concrete unit arcs.

    ``labels[i]`` names node ``i``: ``("node", v)`` for an original node,
    ``("in", v, e)`` / ``("out", v, e)`` for the split halves of merging node
    ``v``, and ``("sink", t)`` for the terminal collecting sink ``t``'s inputs.
    """

    labels: tuple
    tails: np.ndarray
    heads: np.ndarray
    source: int
    terminals: dict[int, int]

    @property
    def node_count(self) -> int:
        return len(self.labels)

    def node_index(self, label) -> int:
        return self.labels.index(tuple(label))


def gated_decomposition(network: Network, layout: BlockLayout) -> tuple[GatedGraph, tuple]:
    """The decomposed graph with every in->out arc gated by its genotype bit."""
    merging = {b.node for b in layout.blocks}
    merging.update(merging_nodes(network))
    labels = [("node", v) for v in range(network.node_count)]
    in_node, out_node = {}, {}
    for v in sorted(merging):
        for e in network.in_edges[v]:
            in_node[(v, e)] = len(labels)
            labels.append(("in", v, e))
        for f in network.out_edges[v]:
            out_node[(v, f)] = len(labels)
            labels.append(("out", v, f))
    tails, heads, gate = [], [], []

    def arc(a, b, g=-1):
        tails.append(a)
        heads.append(b)
        gate.append(g)

    for e, (a, b) in enumerate(network.edges):
        arc(out_node.get((a, e), a), in_node.get((b, e), b))
    for block, offset in zip(layout.blocks, layout.block_offsets):
        dst = out_node[(block.node, block.out_edge)]
        for j, e in enumerate(block.in_edges):
            arc(in_node[(block.node, e)], dst, int(offset) + j)
    terminals = []
    for t in network.sinks:
        star = len(labels)
        labels.append(("sink", t))
        terminals.append(star)
        if t in merging:
            for e in network.in_edges[t]:
                arc(in_node[(t, e)], star)
        else:
            arc(t, star)
    graph = GatedGraph(len(labels), np.array(tails, dtype=np.int64), np.array(heads, dtype=np.int64),
                       np.array(gate, dtype=np.int64), network.source, np.array(terminals))
    return graph, tuple(labels)


def decompose(network: Network, layout: BlockLayout, genotype) -> FlowGraph:
    genotype = np.asarray(genotype, dtype=np.uint8)
    if genotype.shape != (layout.genotype_length,):
        raise ValueError(
            f"genotype length {genotype.size} does not match layout length {layout.genotype_length}"
        )
    graph, labels = gated_decomposition(network, layout)
    keep = (graph.gate < 0) | (genotype[np.maximum(graph.gate, 0)] == 1) if genotype.size else graph.gate < 0
    return FlowGraph(
        labels,
        graph.tails[keep],
        graph.heads[keep],
        network.source,
        dict(zip(network.sinks, (int(t) for t in graph.terminals))),
    )


# ---------------------------------------------------------------------------
# genotype text form


def format_genotype(layout: BlockLayout, genotype) -> str:
    """Blocks as 0/1 runs joined by ``|``, e.g. ``"11|10|00|01"``."""
    return "|".join("".join(str(int(x)) for x in block) for block in layout.split(genotype))


def parse_genotype(layout: BlockLayout, text: str) -> np.ndarray:
    parts = text.strip().split("|") if text.strip() else []
    if len(parts) != layout.block_count:
        raise ValueError(f"expected {layout.block_count} blocks, got {len(parts)}")
    bits = []
    for part, k in zip(parts, layout.block_lengths):
        if len(part) != k or set(part) - {"0", "1"}:
            raise ValueError(f"bad block {part!r} (expected {k} binary digits)")
        bits.extend(int(c) for c in part)
    return np.array(bits, dtype=np.uint8)
