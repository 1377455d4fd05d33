import itertools

import numpy as np
import pytest

from cgsbound.errors import CapExceededError, InvalidFlowError
from cgsbound.graph import Graph, generate
from cgsbound.paths import apsp, enumerate_shortest_paths
from cgsbound.scores import scores_brute_force, scores_single_path, scores_uniform
from cgsbound.spectral import algebraic_connectivity
from cgsbound.strategy import (
    FLOW_TOL,
    build_pair_dags,
    lp_oracle_small,
    optimize_strategy,
    single_path_strategy,
    strategy_from_pair_flows,
    strategy_scores,
    uniform_strategy,
)

from conftest import random_connected, small_named_graphs, table_graphs


def clockwise_c4(g, ap):
    """Both antipodal pairs of C4 sent through edge (1, 2)."""
    flows = uniform_strategy(g, ap).pair_flows()
    flows[(0, 2)] = {(0, 1): 1.0, (1, 2): 1.0}
    flows[(1, 3)] = {(1, 2): 1.0, (2, 3): 1.0}
    return flows


def test_c4_uniform_flow(c4):
    g, ap = c4
    s = strategy_scores(g, ap, uniform_strategy(g, ap))
    assert np.allclose(s.scores, 3)


def test_c4_clockwise(c4):
    g, ap = c4
    strat = strategy_from_pair_flows(g, ap, clockwise_c4(g, ap))
    s = strategy_scores(g, ap, strat)
    # (1,2) carries both antipodal pairs, (0,3) only its own endpoints
    assert sorted(s.scores) == [1, 3, 3, 5]
    assert s.scores[g.edge_id(1, 2)] == 5
    assert np.allclose(scores_brute_force(g, ap, strat).scores, s.scores)


def test_tree_flow_is_forced():
    g = generate("star", n=7)
    ap = apsp(g)
    assert np.array_equal(uniform_strategy(g, ap).flow, single_path_strategy(g, ap).flow)
    assert np.array_equal(strategy_scores(g, ap, uniform_strategy(g, ap)).scores,
                          scores_single_path(g, ap).scores)


@pytest.mark.parametrize("g", small_named_graphs() + random_connected(15, 4, 14, seed=11), ids=lambda g: g.name)
def test_strategy_scores_match_other_routes(g):
    ap = apsp(g)
    uni = uniform_strategy(g, ap)
    single = single_path_strategy(g, ap)
    assert uni.conservation_error() <= 1e-12
    assert np.allclose(strategy_scores(g, ap, uni).scores, scores_uniform(g, ap).scores, atol=1e-10)
    assert np.array_equal(strategy_scores(g, ap, single).scores, scores_single_path(g, ap).scores)


@pytest.mark.parametrize("g", small_named_graphs() + random_connected(8, 4, 10, seed=12), ids=lambda g: g.name)
def test_brute_force_follows_optimized_flow(g):
    ap = apsp(g)
    res = optimize_strategy(g, ap, max_iters=40)
    by_paths = scores_brute_force(g, ap, res.strategy)
    assert np.allclose(by_paths.scores, res.scores.scores, atol=1e-9)


def test_invalid_flow_rejected(c4):
    g, ap = c4
    # pair 0-2 sends 0.7 out of the source but only 0.5 reaches the sink
    bad = {(0, 2): {(0, 1): 0.7, (1, 2): 0.5, (0, 3): 0.3, (3, 2): 0.5}}
    with pytest.raises(InvalidFlowError):
        strategy_from_pair_flows(g, ap, bad)
    with pytest.raises(InvalidFlowError):
        strategy_from_pair_flows(g, ap, {(0, 2): {(0, 2): 1.0}})
    uni = uniform_strategy(g, ap)
    with pytest.raises(InvalidFlowError):
        strategy_scores(g, ap, uni.with_flow(uni.flow * 1.01))
    with pytest.raises(InvalidFlowError):
        strategy_scores(g, ap, uni.with_flow(uni.flow[:-1]))


def test_strategy_csv(c4):
    g, ap = c4
    lines = uniform_strategy(g, ap).to_csv(g).splitlines()
    assert lines[0] == "u,v,dag_edge_u,dag_edge_v,flow"
    assert "0,2,0,1,0.5" in lines
    assert "0,1,0,1,1" in lines
    assert len(lines) == 1 + build_pair_dags(g, ap).num_arcs


@pytest.mark.parametrize("name, n, c", [("cycle", 4, 3), ("cycle", 5, 5), ("complete", 6, 1), ("complete", 9, 1)])
def test_optimizer_known_optima(name, n, c):
    g = generate(name, n=n)
    res = optimize_strategy(g, apsp(g))
    assert res.c_max == pytest.approx(c, rel=1e-6)
    assert res.converged


def test_complete_graph_bound_is_tight():
    g = generate("complete", n=8)
    res = optimize_strategy(g, apsp(g))
    assert res.bound == pytest.approx(algebraic_connectivity(g), rel=1e-10)


@pytest.mark.parametrize("name, n, c", [("cycle", 4, 3), ("path", 5, 15), ("complete", 4, 1)])
def test_lp_oracle_examples(name, n, c):
    g = generate(name, n=n)
    assert lp_oracle_small(g, apsp(g)) == pytest.approx(c, rel=1e-9)


def test_lp_oracle_cap():
    edges = []
    for i in range(10):
        a, b = 3 * i, 3 * i + 3
        edges += [(a, a + 1), (a, a + 2), (a + 1, b), (a + 2, b)]
    g = Graph.from_edges(31, edges)
    with pytest.raises(CapExceededError):
        lp_oracle_small(g, apsp(g), cap=500)


def test_every_iterate_feasible_and_history_monotone():
    g = generate("erdos_renyi", n=16, p=0.3, seed=8)
    ap = apsp(g)
    errors = []
    res = optimize_strategy(g, ap, on_pass=lambda it, s: errors.append(s.conservation_error()))
    assert len(errors) > 10 and max(errors) <= FLOW_TOL
    assert all(b < a for a, b in zip(res.history, res.history[1:]))
    assert res.history[-1] == res.c_max


@pytest.mark.parametrize("g", table_graphs() + random_connected(30, 4, 12, seed=13), ids=lambda g: g.name)
def test_optimizer_against_lp(g):
    ap = apsp(g)
    res = optimize_strategy(g, ap)
    exact = lp_oracle_small(g, ap)
    assert res.dual_bound <= exact * (1 + 1e-9)
    assert exact <= res.c_max * (1 + 1e-9)
    assert res.c_max <= exact * 1.01
    res.strategy.validate()


@pytest.mark.parametrize("g", small_named_graphs() + random_connected(25, 4, 30, seed=14), ids=lambda g: g.name)
def test_dominance_chain(g):
    ap = apsp(g)
    res = optimize_strategy(g, ap)
    tol = 1e-6
    assert res.c_max <= scores_uniform(g, ap).c_max * (1 + tol)
    assert res.c_max <= scores_single_path(g, ap).c_max * (1 + tol)
    assert res.bound <= algebraic_connectivity(g) + 1e-9


def test_start_strategy_is_respected(c4):
    g, ap = c4
    start = strategy_from_pair_flows(g, ap, clockwise_c4(g, ap))
    res = optimize_strategy(g, ap, start=start)
    assert res.history[0] == 5
    assert res.c_max == pytest.approx(3, rel=1e-6)


def test_optimizer_rejects_bad_tol(c4):
    g, ap = c4
    with pytest.raises(ValueError):
        optimize_strategy(g, ap, tol=0)


def test_pair_dags_cover_shortest_paths():
    g = generate("erdos_renyi", n=9, p=0.4, seed=3)
    ap = apsp(g)
    d = build_pair_dags(g, ap)
    for k, (u, v) in enumerate(d.pairs):
        sl = d.arcs_of(k)
        arcs = set(zip(d.tails[sl].tolist(), d.heads[sl].tolist()))
        want = {(a, b) for p in enumerate_shortest_paths(g, ap, u, v) for a, b in zip(p, p[1:])}
        assert arcs == want
    assert list(d.pairs) == list(itertools.combinations(range(g.n), 2))
