"""Unit-capacity multicast networks: data model, generators and text format.

A network is a directed acyclic multigraph.  Every edge carries one unit of
flow; a link of capacity ``c`` is written as ``c`` parallel edges.  Edge ids are
positions in ``Network.edges``.

File format (one directive per line, ``#`` starts a comment)::

    nodes 4
    source 0
    sinks 3
    rate 2
    edge 0 1
    edge 0 2
    edge 1 3
    edge 2 3
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class NetworkError(ValueError):
    """A network violates the data-model invariants."""


class NetworkFormatError(NetworkError):
    """Malformed network file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _topological_order(node_count: int, edges) -> list[int] | None:
    indeg = [0] * node_count
    succ: list[list[int]] = [[] for _ in range(node_count)]
    for tail, head in edges:
        indeg[head] += 1
        succ[tail].append(head)
    queue = deque(v for v in range(node_count) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for h in succ[v]:
            indeg[h] -= 1
            if indeg[h] == 0:
                queue.append(h)
    return order if len(order) == node_count else None


@dataclass(frozen=True)
class Network:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    source: int
    sinks: tuple[int, ...]
    rate: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "sinks", tuple(int(t) for t in self.sinks))
        n = self.node_count
        if n < 0:
            raise NetworkError("node_count must be nonnegative")
        for tail, head in self.edges:
            if not (0 <= tail < n and 0 <= head < n):
                raise NetworkError(f"dangling node id in edge ({tail}, {head})")
        if not 0 <= self.source < n:
            raise NetworkError(f"dangling node id: source {self.source}")
        if not self.sinks:
            raise NetworkError("sink set is empty")
        if len(set(self.sinks)) != len(self.sinks):
            raise NetworkError("duplicate sink")
        for t in self.sinks:
            if not 0 <= t < n:
                raise NetworkError(f"dangling node id: sink {t}")
        if self.source in self.sinks:
            raise NetworkError("source is also a sink")
        if self.rate < 1:
            raise NetworkError("rate must be >= 1")
        if _topological_order(n, self.edges) is None:
            raise NetworkError("cyclic graph")

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        """Incoming edge ids per node, ascending."""
        acc: list[list[int]] = [[] for _ in range(self.node_count)]
        for e, (_, head) in enumerate(self.edges):
            acc[head].append(e)
        return tuple(tuple(x) for x in acc)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in range(self.node_count)]
        for e, (tail, _) in enumerate(self.edges):
            acc[tail].append(e)
        return tuple(tuple(x) for x in acc)

    def topological_order(self) -> list[int]:
        return _topological_order(self.node_count, self.edges)

    def without_edges(self, removed) -> "Network":
        """Copy with the given edge ids dropped (remaining ids are renumbered)."""
        removed = set(removed)
        kept = [edge for e, edge in enumerate(self.edges) if e not in removed]
        return Network(self.node_count, tuple(kept), self.source, self.sinks, self.rate)


# ---------------------------------------------------------------------------
# text format


def parse_network(text: str) -> Network:
    node_count = source = rate = None
    sinks: tuple[int, ...] | None = None
    edges: list[tuple[int, int]] = []
    edge_lines: list[int] = []

    def ints(args, lineno, count=None):
        if count is not None and len(args) != count:
            raise NetworkFormatError(f"expected {count} argument(s), got {len(args)}", lineno)
        try:
            return [int(a) for a in args]
        except ValueError:
            raise NetworkFormatError(f"non-integer argument in {args!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key == "nodes":
            (node_count,) = ints(args, lineno, 1)
            if node_count < 0:
                raise NetworkFormatError("negative node count", lineno)
        elif key == "source":
            (source,) = ints(args, lineno, 1)
        elif key == "sinks":
            if not args:
                raise NetworkFormatError("empty sink list", lineno)
            sinks = tuple(ints(args, lineno))
        elif key == "rate":
            (rate,) = ints(args, lineno, 1)
            if rate < 1:
                raise NetworkFormatError("rate must be >= 1", lineno)
        elif key == "edge":
            tail, head = ints(args, lineno, 2)
            edges.append((tail, head))
            edge_lines.append(lineno)
        else:
            raise NetworkFormatError(f"unknown directive {key!r}", lineno)

    for name, value in (("nodes", node_count), ("source", source), ("sinks", sinks), ("rate", rate)):
        if value is None:
            raise NetworkFormatError(f"missing '{name}' declaration")
    for (tail, head), lineno in zip(edges, edge_lines):
        if not (0 <= tail < node_count and 0 <= head < node_count):
            raise NetworkFormatError(f"dangling node id in edge {tail} {head}", lineno)
    if _topological_order(node_count, edges) is None:
        raise NetworkFormatError("cyclic graph")
    try:
        return Network(node_count, tuple(edges), source, sinks, rate)
    except NetworkError as exc:
        raise NetworkFormatError(str(exc)) from None


def serialize_network(network: Network, comment: str | None = None) -> str:
    if not network.sinks:
        raise NetworkError("sink set is empty")
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"nodes {network.node_count}")
    lines.append(f"source {network.source}")
    lines.append("sinks " + " ".join(str(t) for t in network.sinks))
    lines.append(f"rate {network.rate}")
    lines.extend(f"edge {a} {b}" for a, b in network.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical networks

BUTTERFLY_NODES = ("s", "u", "v", "z", "w", "t1", "t2")


def _butterfly_edges(s, u, v, z, w, t1, t2, zw_links=1):
    return (
        [(s, u), (s, v), (u, t1), (v, t2), (u, z), (v, z)]
        + [(z, w)] * zw_links
        + [(w, t1), (w, t2)]
    )


def make_canonical(which: str) -> Network:
    """The butterfly ``"B"`` or its variant ``"B_prime"`` with a doubled z->w link.

    Node ids follow ``BUTTERFLY_NODES``.
    """
    key = which.replace("′", "_prime").replace("'", "_prime")
    if key not in ("B", "B_prime"):
        raise ValueError(f"unknown canonical network {which!r}")
    edges = _butterfly_edges(*range(7), zw_links=2 if key == "B_prime" else 1)
    return Network(7, tuple(edges), source=0, sinks=(5, 6), rate=2)


def make_cascade(copies: int) -> Network:
    """Full binary tree of B' copies.

    Each non-leaf copy's two sinks serve as the sources of its two children;
    the network's sinks are the sinks of the leaf copies.
    """
    if copies < 1 or (copies + 1) & copies:
        raise ValueError(f"copies must be of the form 2^d - 1, got {copies}")
    edges: list[tuple[int, int]] = []
    copy_source = {0: 0}
    next_id = 1
    sinks = []
    for c in range(copies):
        s = copy_source[c]
        u, v, z, w, t1, t2 = range(next_id, next_id + 6)
        next_id += 6
        edges.extend(_butterfly_edges(s, u, v, z, w, t1, t2, zw_links=2))
        left, right = 2 * c + 1, 2 * c + 2
        if left < copies:
            copy_source[left] = t1
            copy_source[right] = t2
        else:
            sinks.extend((t1, t2))
    return Network(next_id, tuple(edges), source=0, sinks=tuple(sinks), rate=2)


# ---------------------------------------------------------------------------
# random layered networks


@dataclass(frozen=True)
class GeneratorParams:
    node_count: int
    edge_count: int
    layer_count: int
    sink_count: int
    rate: int = 2
    seed: int = 0
    #: If set, an edge may skip at most this many layers (1 = adjacent layers only).
    max_span: int | None = None

    def __post_init__(self):
        for name in ("node_count", "edge_count", "layer_count", "sink_count", "rate"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.edge_count < self.node_count - 1:
            raise ValueError("edge_count must be >= node_count - 1")
        if self.layer_count < 2:
            raise ValueError("need at least two layers (source and sinks)")
        if self.max_span is not None and self.max_span < 1:
            raise ValueError("max_span must be positive")
        if self.node_count - 1 - self.sink_count < self.layer_count - 2:
            raise ValueError("too few nodes to populate every layer")


def _min_sink_flow(node_count, edges, source, sinks, limit) -> int:
    from .feasibility import GatedGraph

    graph = GatedGraph.from_network_edges(node_count, edges, source, sinks)
    mask = np.ones(len(edges), dtype=np.uint8)
    return graph.min_terminal_flow(mask, limit)


def make_random_acyclic(params: GeneratorParams, max_retries: int = 200) -> Network:
    """Layered random DAG whose sinks all admit ``params.rate`` unit flows.

    Layer 0 holds the source, the last layer holds the sinks.  A random
    spanning arborescence keeps every node reachable; the remaining edges join
    uniformly chosen lower-layer tails to higher-layer heads.  ``max_span``
    limits how many layers an edge may skip; short spans create the middle
    bottlenecks that make coding worthwhile.  Draws are repeated
    (deterministically in ``params.seed``) until the rate is met.
    """
    p = params
    rng = np.random.default_rng(p.seed)
    n, L = p.node_count, p.layer_count
    span = p.max_span or L
    n_mid = n - 1 - p.sink_count
    for _ in range(max_retries):
        layer = np.empty(n, dtype=np.int64)
        layer[0] = 0
        mid_layers = np.concatenate(
            [np.arange(1, L - 1), rng.integers(1, L - 1, size=n_mid - (L - 2))]
        ) if L > 2 else np.empty(0, dtype=np.int64)
        layer[1 : 1 + n_mid] = np.sort(mid_layers)
        layer[1 + n_mid :] = L - 1
        sinks = tuple(range(1 + n_mid, n))

        edges = []
        for v in range(1, n):
            lower = np.flatnonzero((layer < layer[v]) & (layer >= layer[v] - span))
            edges.append((int(rng.choice(lower)), v))
        while len(edges) < p.edge_count:
            head = int(rng.integers(1, n))
            lower = np.flatnonzero((layer < layer[head]) & (layer >= layer[head] - span))
            edges.append((int(rng.choice(lower)), head))
        order = rng.permutation(len(edges))
        edges = [edges[i] for i in order]
        if _min_sink_flow(n, edges, 0, sinks, p.rate) >= p.rate:
            return Network(n, tuple(edges), 0, sinks, p.rate)
    raise NetworkError(f"no rate-{p.rate} network found in {max_retries} draws for {p}")


#: Layered networks of 70 to 90 blocks (mean length near 3.8) and about 130 blocks (near 5.9).
#: At rate 2 these rarely need any coding link.
I50_LIKE = GeneratorParams(node_count=35, edge_count=140, layer_count=4, sink_count=2, rate=2)
I75_LIKE = GeneratorParams(node_count=30, edge_count=180, layer_count=6, sink_count=4, rate=2)
#: Adjacent-layer edges at rate 4; unlike the two above, these usually need coding.
CODING_LIKE = GeneratorParams(node_count=30, edge_count=105, layer_count=8, sink_count=4,
                              rate=4, max_span=1)
