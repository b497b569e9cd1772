"""Unit-capacity max-flow on gated arc lists.

Arcs are stored as residual slot pairs: slot ``2a`` is arc ``a`` forward and
slot ``2a + 1`` its reverse, so ``s ^ 1`` is always the partner slot.  A gated
graph attaches to each arc either ``-1`` (always present) or the index of a
mask bit that switches it on.  Flow is found by repeated BFS augmentation,
which is exact for unit capacities and stops early once ``limit`` is reached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


@njit(cache=True)
def _augment(adj_start, adj_slot, slot_to, cap, source, target, limit, parent, queue):
    if source == target:
        return 0
    n = parent.shape[0]
    flow = 0
    while flow < limit:
        for i in range(n):
            parent[i] = -2
        parent[source] = -1
        qh = 0
        qt = 1
        queue[0] = source
        found = False
        while qh < qt and not found:
            u = queue[qh]
            qh += 1
            for j in range(adj_start[u], adj_start[u + 1]):
                s = adj_slot[j]
                if cap[s] > 0:
                    v = slot_to[s]
                    if parent[v] == -2:
                        parent[v] = s
                        if v == target:
                            found = True
                            break
                        queue[qt] = v
                        qt += 1
        if not found:
            break
        v = target
        while v != source:
            s = parent[v]
            cap[s] -= 1
            cap[s ^ 1] += 1
            v = slot_to[s ^ 1]
        flow += 1
    return flow


@njit(cache=True)
def _load_caps(gate, bits, cap):
    for a in range(gate.shape[0]):
        g = gate[a]
        cap[2 * a] = 1 if (g < 0 or bits[g] != 0) else 0
        cap[2 * a + 1] = 0


@njit(cache=True)
def _min_terminal_flow(adj_start, adj_slot, slot_to, gate, bits, source, terminals, limit):
    n = adj_start.shape[0] - 1
    cap = np.empty(2 * gate.shape[0], dtype=np.int32)
    parent = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    best = limit
    for i in range(terminals.shape[0]):
        _load_caps(gate, bits, cap)
        f = _augment(adj_start, adj_slot, slot_to, cap, source, terminals[i], best, parent, queue)
        if f < best:
            best = f
            if best == 0:
                break
    return best


@njit(cache=True)
def _fitness_rows(pop, adj_start, adj_slot, slot_to, gate, source, terminals, rate,
                  block_offsets, block_lengths):
    """Coding-block count per row, or -1 where some terminal gets less than ``rate``."""
    n = adj_start.shape[0] - 1
    cap = np.empty(2 * gate.shape[0], dtype=np.int32)
    parent = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    out = np.empty(pop.shape[0], dtype=np.int64)
    for p in range(pop.shape[0]):
        bits = pop[p]
        ok = True
        for i in range(terminals.shape[0]):
            _load_caps(gate, bits, cap)
            if _augment(adj_start, adj_slot, slot_to, cap, source, terminals[i], rate,
                        parent, queue) < rate:
                ok = False
                break
        if not ok:
            out[p] = -1
            continue
        coded = 0
        for b in range(block_offsets.shape[0]):
            ones = 0
            start = block_offsets[b]
            for j in range(start, start + block_lengths[b]):
                ones += bits[j]
            if ones >= 2:
                coded += 1
        out[p] = coded
    return out


@dataclass(frozen=True, eq=False)
class GatedGraph:
    """Arc list with optional per-arc gate bits, compiled to CSR residual form."""

    node_count: int
    tails: np.ndarray
    heads: np.ndarray
    gate: np.ndarray
    source: int
    terminals: np.ndarray

    def __post_init__(self):
        tails = np.asarray(self.tails, dtype=np.int64)
        heads = np.asarray(self.heads, dtype=np.int64)
        n_arcs = tails.shape[0]
        slot_from = np.empty(2 * n_arcs, dtype=np.int64)
        slot_to = np.empty(2 * n_arcs, dtype=np.int64)
        slot_from[0::2], slot_from[1::2] = tails, heads
        slot_to[0::2], slot_to[1::2] = heads, tails
        order = np.argsort(slot_from, kind="stable")
        counts = np.bincount(slot_from, minlength=self.node_count)
        adj_start = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=adj_start[1:])
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "gate", np.asarray(self.gate, dtype=np.int64))
        object.__setattr__(self, "terminals", np.asarray(self.terminals, dtype=np.int64))
        object.__setattr__(self, "adj_start", adj_start)
        object.__setattr__(self, "adj_slot", order.astype(np.int64))
        object.__setattr__(self, "slot_to", slot_to)

    @classmethod
    def from_network_edges(cls, node_count, edges, source, sinks) -> "GatedGraph":
        """Undecomposed network; edge ``e`` is gated by mask bit ``e``."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        return cls(node_count, edges[:, 0], edges[:, 1], np.arange(len(edges)), source,
                   np.asarray(sinks))

    def flow(self, mask, source: int, target: int, limit: int | None = None) -> int:
        mask = np.ascontiguousarray(mask, dtype=np.uint8)
        cap = np.empty(2 * len(self.gate), dtype=np.int32)
        _load_caps(self.gate, mask, cap)
        parent = np.empty(self.node_count, dtype=np.int64)
        queue = np.empty(self.node_count, dtype=np.int64)
        if limit is None:
            limit = len(self.gate) + 1
        return int(_augment(self.adj_start, self.adj_slot, self.slot_to, cap, source, target,
                            limit, parent, queue))

    def min_terminal_flow(self, mask, limit: int) -> int:
        """min over terminals of max-flow from the source, capped at ``limit``."""
        mask = np.ascontiguousarray(mask, dtype=np.uint8)
        return int(_min_terminal_flow(self.adj_start, self.adj_slot, self.slot_to, self.gate,
                                      mask, self.source, self.terminals, limit))
