import random

import pytest

from conftest import load_machine
from slsvm.mpcp import compile_tiles, is_partial_solution
from slsvm.swarm import (SwarmStats, TileTree, aco_iteration,
                         aco_run_universal, pso_run_universal)
from slsvm.tm import ACCEPTED, BUDGET_EXHAUSTED, normalize, simulate
from slsvm.uga import STALLED, STOCHASTIC, run_universal


def test_fresh_tree_first_iteration(m_acc):
    ts = compile_tiles(m_acc, "1")
    tree = TileTree(ts)
    assert tree.node_count == 2
    aco_iteration(tree, ts, ants=1, rng=random.Random(0))
    root_child = tree.root.children[0]
    assert root_child.expanded
    assert root_child.pheromone == 1.0
    assert set(root_child.children) == set(range(1, ts.count))
    assert tree.node_count == 2 + ts.count - 1
    assert tree.max_reinforced_depth == 1


def test_reinforced_edges_are_legal_prefixes(m_acc):
    ts = compile_tiles(m_acc, "1")
    tree = TileTree(ts)
    rng = random.Random(3)
    for _ in range(30):
        aco_iteration(tree, ts, ants=2, rng=rng)
        if tree.solution is not None:
            break
    snapshot = tree.edge_pheromones()
    reinforced = [path for path, p in snapshot.items() if p > 0]
    assert (0,) in reinforced
    assert any(len(path) >= 2 for path in reinforced)
    for path in reinforced:
        assert is_partial_solution([ts.tiles[i] for i in path])


def test_failed_children_never_reinforced(m_acc):
    ts = compile_tiles(m_acc, "1")
    tree = TileTree(ts)
    rng = random.Random(1)
    for _ in range(20):
        aco_iteration(tree, ts, ants=3, rng=rng)
        if tree.solution is not None:
            break
    stack = [tree.root]
    saw_failure = False
    while stack:
        node = stack.pop()
        for idx in node.failed:
            saw_failure = True
            assert node.children[idx].pheromone == 0.0
        stack.extend(node.children.values())
    assert saw_failure


def test_pheromone_monotone_per_iteration(m_acc):
    ts = compile_tiles(m_acc, "1")
    tree = TileTree(ts)
    rng = random.Random(7)
    previous = tree.edge_pheromones()
    for _ in range(15):
        aco_iteration(tree, ts, ants=2, rng=rng)
        current = tree.edge_pheromones()
        for path, level in previous.items():
            assert current[path] >= level
        previous = current
        if tree.solution is not None:
            break


def test_aco_matches_direct_simulation(m_acc):
    oracle = simulate(m_acc, "1", 100)
    result = aco_run_universal(m_acc, "1", ants=4, budget=5000, seed=5)
    assert result.status == ACCEPTED
    assert result.history.render() == oracle.render()
    assert result.solution[0] == 0
    assert result.solution[-1] in compile_tiles(m_acc, "1").closing_indices


def test_aco_trivial_acceptor():
    m = load_machine("trivial.tm")
    result = aco_run_universal(m, "1", ants=2, budget=5000, seed=0)
    assert result.status == ACCEPTED
    assert result.history.render() == simulate(m, "1", 10).render()


def test_aco_looper_amortized_depth_progress(looper):
    # with one ant each iteration either reinforces one level deeper or
    # burns one of the at most n-2 wrong tiles at some spine node, so
    # budget <= depth + (depth + 1) * (n - 2)
    budget = 2000
    result = aco_run_universal(looper, "", ants=1, budget=budget, seed=0)
    assert result.status == BUDGET_EXHAUSTED
    n = compile_tiles(looper, "").count
    depth = result.stats.max_depth
    assert budget <= depth + (depth + 1) * (n - 2)
    assert depth >= 100


def test_aco_stalls_on_stuck_machine():
    m = normalize(load_machine("astarbstar.tm"))
    result = aco_run_universal(m, "ba", ants=3, budget=10000, seed=0)
    assert result.status == STALLED


def test_aco_rejects_zero_ants(m_acc):
    with pytest.raises(ValueError):
        aco_run_universal(m_acc, "1", ants=0, budget=10)


def test_aco_deterministic_per_seed(m_acc):
    first = aco_run_universal(m_acc, "1", ants=4, budget=5000, seed=11)
    second = aco_run_universal(m_acc, "1", ants=4, budget=5000, seed=11)
    assert first.solution == second.solution
    assert first.stats == second.stats


def test_pso_matches_direct_simulation(m_acc):
    oracle = simulate(m_acc, "1", 100)
    result = pso_run_universal(m_acc, "1", particles=8, budget=5000, seed=2)
    assert result.status == ACCEPTED
    assert result.history.render() == oracle.render()


def test_pso_single_particle_matches_ga_verdict(m_acc):
    pso = pso_run_universal(m_acc, "1", particles=1, budget=50000, seed=4)
    ga = run_universal(m_acc, "1", mode=STOCHASTIC, budget=50000, seed=4)
    assert pso.status == ga.status == ACCEPTED
    assert pso.history.render() == ga.history.render()


def test_pso_stalls_on_stuck_machine():
    m = normalize(load_machine("astarbstar.tm"))
    result = pso_run_universal(m, "ba", particles=3, budget=10000, seed=0)
    assert result.status == STALLED


def test_pso_rejects_zero_particles(m_acc):
    with pytest.raises(ValueError):
        pso_run_universal(m_acc, "1", particles=0, budget=10)


def test_pso_looper_budget_exhausted(looper):
    result = pso_run_universal(looper, "", particles=2, budget=500, seed=0)
    assert result.status == BUDGET_EXHAUSTED
    assert result.stats.iterations == 500
    assert result.stats.max_depth > 10


def test_stats_render():
    stats = SwarmStats(iterations=5, nodes=30, max_depth=4)
    assert stats.render() == "iterations=5 nodes=30 max_depth=4"
