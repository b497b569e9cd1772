import time

import numpy as np
import pytest

from ncga import (Evaluator, GeneratorParams, Network, build_layout, exhaustive_min,
                  make_canonical, make_cascade, make_random_acyclic, minimal_linkstate,
                  minimal_subgraph)
from ncga.baselines import SearchSpaceTooLarge, achievable
from ncga.netgraph import NetworkError

from .oracles import network_sink_flows


def test_exhaustive_canonical():
    assert exhaustive_min(make_canonical("B")) == 1
    assert exhaustive_min(make_canonical("B_prime")) == 0
    assert exhaustive_min(make_cascade(1)) == 0


def test_exhaustive_cap():
    with pytest.raises(SearchSpaceTooLarge):
        exhaustive_min(make_cascade(7), cap=10**6)


def test_exhaustive_infeasible():
    net = Network(4, ((0, 1), (1, 3), (0, 2), (2, 3)), 0, (3,), 3)
    with pytest.raises(NetworkError):
        exhaustive_min(net)


def test_minimal_subgraph_is_minimal(cascade3):
    rng = np.random.default_rng(0)
    for _ in range(5):
        res = minimal_subgraph(cascade3, rng)
        kept = set(res.artifact)
        sub = cascade3.without_edges(set(range(len(cascade3.edges))) - kept)
        assert min(network_sink_flows(sub).values()) >= 2
        for e in kept:
            smaller = cascade3.without_edges(set(range(len(cascade3.edges))) - (kept - {e}))
            assert min(network_sink_flows(smaller).values()) < 2
        assert res.coding_link_count == 3


def test_minimal_linkstate_bounds(cascade3):
    layout = build_layout(cascade3)
    ev = Evaluator(cascade3, layout)
    rng = np.random.default_rng(1)
    for _ in range(10):
        res = minimal_linkstate(cascade3, rng)
        assert ev.is_feasible(res.artifact)
        assert res.coding_link_count == ev.fitness(res.artifact).coding_blocks
        assert 0 <= res.coding_link_count <= 3 * 4


def test_baselines_refuse_infeasible():
    net = Network(4, ((0, 1), (1, 3), (0, 2), (2, 3)), 0, (3,), 3)
    assert not achievable(net)
    with pytest.raises(NetworkError):
        minimal_subgraph(net, np.random.default_rng(0))
    with pytest.raises(NetworkError):
        minimal_linkstate(net, np.random.default_rng(0))


def test_baselines_bounded_by_exhaustive():
    rng = np.random.default_rng(2)
    checked = 0
    for seed in range(40):
        net = make_random_acyclic(GeneratorParams(10, 20, 4, 2, rate=2, seed=seed, max_span=1))
        try:
            best = exhaustive_min(net, cap=1_000_000)
        except SearchSpaceTooLarge:
            continue
        checked += 1
        assert minimal_linkstate(net, rng).coding_link_count >= best
    assert checked >= 10


def test_exhaustive_under_a_second():
    for which in ("B", "B_prime"):
        start = time.perf_counter()
        exhaustive_min(make_canonical(which))
        assert time.perf_counter() - start < 1.0
