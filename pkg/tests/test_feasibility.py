import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncga import (INFEASIBLE, BudgetExhausted, EvalCounter, Evaluator, Fitness, FlowGraph,
                  GeneratorParams, build_layout, decompose, evaluate, make_canonical,
                  make_random_acyclic, max_flow)

from .oracles import brute_min_cut, network_sink_flows, nx_max_flow, oracle_fitness, oracle_sink_flows


def _random_flowgraph(rng, n, m):
    tails = rng.integers(0, n, m)
    heads = rng.integers(0, n, m)
    keep = tails != heads
    labels = tuple(("node", v) for v in range(n))
    return FlowGraph(labels, tails[keep], heads[keep], 0, {n - 1: n - 1})


def test_max_flow_against_two_oracles():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(2, 8))
        fg = _random_flowgraph(rng, n, int(rng.integers(0, 4 * n)))
        arcs = list(zip(fg.tails.tolist(), fg.heads.tolist()))
        s, t = 0, n - 1
        got = max_flow(fg, s, t)
        assert got == nx_max_flow(n, arcs, s, t)
        assert got == brute_min_cut(n, arcs, s, t)


def test_max_flow_same_endpoint_is_zero():
    fg = _random_flowgraph(np.random.default_rng(1), 5, 12)
    assert max_flow(fg, 2, 2) == 0


def test_max_flow_unknown_node():
    fg = _random_flowgraph(np.random.default_rng(1), 5, 12)
    with pytest.raises(ValueError, match="unknown node"):
        max_flow(fg, 0, 17)


def test_fitness_ordering():
    assert Fitness(0) < Fitness(3) < INFEASIBLE
    assert sorted([INFEASIBLE, Fitness(2), Fitness(0)]) == [Fitness(0), Fitness(2), INFEASIBLE]
    assert str(INFEASIBLE) == "inf" and str(Fitness(4)) == "4"
    assert not INFEASIBLE.is_feasible and Fitness(0).is_feasible
    with pytest.raises(ValueError):
        Fitness.feasible(-1)


def test_eval_counter():
    counter = EvalCounter(3)
    counter.charge(2)
    assert counter.remaining == 1
    with pytest.raises(BudgetExhausted):
        counter.charge(2)
    assert counter.used == 2


def test_evaluate_charges_and_stops(butterfly):
    layout = build_layout(butterfly)
    counter = EvalCounter(2)
    assert evaluate(butterfly, layout, [1, 1], counter) == Fitness(1)
    assert evaluate(butterfly, layout, [1, 0], counter) == INFEASIBLE
    assert counter.used == 2
    with pytest.raises(BudgetExhausted):
        evaluate(butterfly, layout, [0, 1], counter)
    assert counter.used == 2


def test_butterfly_values(butterfly, butterfly_prime):
    ev = Evaluator(butterfly, build_layout(butterfly))
    assert ev.fitness([1, 1]) == Fitness(1)
    assert ev.fitness([0, 0]) == INFEASIBLE
    assert ev.sink_flows([0, 0]) == {5: 1, 6: 1}
    assert ev.sink_flows([1, 0]) == {5: 1, 6: 2}
    lay = build_layout(butterfly_prime)
    evp = Evaluator(butterfly_prime, lay)
    assert evp.fitness(lay.all_ones()) == Fitness(4)
    # z forwards u on one parallel link and v on the other; w sends v to t1, u to t2
    assert evp.fitness([1, 0, 0, 1, 0, 1, 1, 0]) == Fitness(0)


def test_fitness_array_shape_check(butterfly):
    ev = Evaluator(butterfly, build_layout(butterfly))
    with pytest.raises(ValueError):
        ev.fitness_array(np.ones((3, 4), dtype=np.uint8))
    assert list(ev.fitness_array(np.array([[1, 1], [0, 0], [0, 1]]))) == [1, 2, 2]


def _small_random_networks(count, seed=0):
    rng = np.random.default_rng(seed)
    nets = []
    while len(nets) < count:
        n = int(rng.integers(6, 13))
        params = GeneratorParams(n, int(rng.integers(n + 2, 3 * n)), int(rng.integers(3, 5)),
                                 int(rng.integers(1, 4)), rate=int(rng.integers(1, 3)),
                                 seed=int(rng.integers(0, 2**31)))
        try:
            net = make_random_acyclic(params, max_retries=20)
        except ValueError:
            continue
        if build_layout(net).block_count:
            nets.append(net)
    return nets


@pytest.fixture(scope="module")
def small_networks():
    return _small_random_networks(200)


def test_evaluator_matches_oracle(small_networks):
    rng = np.random.default_rng(5)
    for net in small_networks[:80]:
        layout = build_layout(net)
        ev = Evaluator(net, layout)
        for _ in range(3):
            g = (rng.random(layout.genotype_length) < rng.random()).astype(np.uint8)
            want = oracle_fitness(net, layout, g)
            assert ev.fitness(g).coding_blocks == want
            assert ev.sink_flows(g) == oracle_sink_flows(net, g)


def test_all_one_equals_undecomposed(small_networks):
    for net in small_networks:
        layout = build_layout(net)
        ev = Evaluator(net, layout)
        assert ev.sink_flows(layout.all_ones()) == network_sink_flows(net)
        fg = decompose(net, layout, layout.all_ones())
        direct = {t: max_flow(fg, fg.source, star) for t, star in fg.terminals.items()}
        assert direct == network_sink_flows(net)


def test_monotone_in_bits(small_networks):
    rng = np.random.default_rng(6)
    for net in small_networks:
        layout = build_layout(net)
        ev = Evaluator(net, layout)
        g = rng.integers(0, 2, layout.genotype_length).astype(np.uint8)
        zeros = np.flatnonzero(g == 0)
        if not zeros.size:
            continue
        h = g.copy()
        h[rng.choice(zeros)] = 1
        before, after = ev.sink_flows(g), ev.sink_flows(h)
        assert all(after[t] >= before[t] for t in before)
        assert ev.is_feasible(h) or not ev.is_feasible(g)


def test_saturation_equivalence(small_networks):
    rng = np.random.default_rng(7)
    for net in small_networks:
        layout = build_layout(net)
        ev = Evaluator(net, layout)
        g = (rng.random(layout.genotype_length) < 0.7).astype(np.uint8)
        h = g.copy()
        for o, k in zip(layout.block_offsets, layout.block_lengths):
            if h[o:o + k].sum() >= 2:
                h[o:o + k] = 1
        assert ev.fitness(g) == ev.fitness(h)


@settings(max_examples=60, deadline=None)
@given(bits=st.lists(st.integers(0, 1), min_size=8, max_size=8))
def test_butterfly_prime_oracle(bits):
    net = make_canonical("B_prime")
    layout = build_layout(net)
    assert Evaluator(net, layout).fitness(bits).coding_blocks == oracle_fitness(net, layout, bits)
