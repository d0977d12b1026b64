"""Three classic heuristic instances wired into the shared engine.

A genetic algorithm on OneMax bit strings, an ant colony on shortest
paths in a directed acyclic graph, and a particle swarm minimizing the
sphere function.  They exist to exercise the engine's generic rules and
the statement expansions; each factory returns a
:class:`~slsvm.engine.FunctionSuite`.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .engine import ABSENT, FunctionSuite, present


def onemax_ga_suite(n: int, pop_size: int = 8, mut_rate: float = 0.05,
                    max_generations: int = 50,
                    log: Optional[list] = None) -> FunctionSuite:
    """Population GA maximizing the number of ones in a bit string.

    Tournament selection of size two, one-point crossover on consecutive
    pairs, independent per-bit mutation.  ``log`` (if given) collects
    ``(generation, best_fitness)`` pairs after every evaluation.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if pop_size < 2:
        raise ValueError("pop_size must be at least 2")
    if not 0.0 <= mut_rate <= 1.0:
        raise ValueError("mut_rate must lie in [0, 1]")
    if max_generations < 0:
        raise ValueError("max_generations must be nonnegative")

    def init(_algorithm):
        return {"generation": 0}

    def set_problem(pexp, state, rng):
        size = int(pexp)
        if size != n:
            raise ValueError("problem size disagrees with the suite's n")
        return size, state.extra

    def generate(state, rng):
        pop = tuple(tuple(rng.randrange(2) for _ in range(n))
                    for _ in range(pop_size))
        return pop, state.extra

    def aeval(state, rng):
        sols = present(state.sols, "Sols")
        fitness = tuple(sum(ind) for ind in sols)
        extra = dict(state.extra)
        extra["generation"] += 1
        return fitness, extra

    def beval(state, rng):
        sols = present(state.sols, "Sols")
        fitness = present(state.fpw, "FPW")
        champion = max(range(len(sols)), key=lambda i: fitness[i])
        best = state.best
        if best is ABSENT or fitness[champion] > sum(best):
            best = sols[champion]
        if log is not None:
            log.append((state.extra["generation"], sum(best)))
        return best, state.extra

    def stop(state):
        best = state.best
        if best is not ABSENT and sum(best) == state.prob:
            return True
        return state.extra["generation"] > max_generations

    def select(state, rng):
        sols = present(state.sols, "Sols")
        fitness = present(state.fpw, "FPW")
        chosen = []
        for _ in range(pop_size):
            a = rng.randrange(len(sols))
            b = rng.randrange(len(sols))
            chosen.append(sols[a] if fitness[a] >= fitness[b] else sols[b])
        return tuple(chosen), state.extra

    def cross(state, rng):
        sols = list(present(state.sols, "Sols"))
        if n > 1:
            for i in range(0, len(sols) - 1, 2):
                point = rng.randrange(1, n)
                left, right = sols[i], sols[i + 1]
                sols[i] = left[:point] + right[point:]
                sols[i + 1] = right[:point] + left[point:]
        return tuple(sols), state.extra

    def mutate(state, rng):
        sols = present(state.sols, "Sols")
        out = tuple(
            tuple(bit ^ 1 if rng.random() < mut_rate else bit for bit in ind)
            for ind in sols)
        return out, state.extra

    return FunctionSuite(
        algorithm="ga",
        init=init,
        set_problem=set_problem,
        generate=generate,
        aeval=aeval,
        beval=beval,
        stop_criterion=stop,
        instance_fns={
            "select": ("sols", select),
            "cross": ("sols", cross),
            "mutate": ("sols", mutate),
        },
        expansions={"nextGen": ("select", "cross", "mutate")},
    )


def validate_graph(edges: Sequence[tuple]):
    """Check the shortest-path instance: positive costs, a unique source
    and sink, acyclicity.  Returns ``(adjacency, source, sink)`` where
    adjacency maps a node to its outgoing edge indices."""
    if not edges:
        raise ValueError("edge list must be nonempty")
    nodes = set()
    adjacency: dict = {}
    indegree: dict = {}
    for i, (u, v, cost) in enumerate(edges):
        if cost <= 0:
            raise ValueError(f"edge {u}->{v} has nonpositive cost")
        if u == v:
            raise ValueError(f"self-loop at {u}")
        nodes.update((u, v))
        adjacency.setdefault(u, []).append(i)
        adjacency.setdefault(v, [])
        indegree[v] = indegree.get(v, 0) + 1
        indegree.setdefault(u, indegree.get(u, 0))
    sources = [u for u in nodes if indegree[u] == 0]
    sinks = [u for u in nodes if not adjacency[u]]
    if len(sources) != 1 or len(sinks) != 1:
        raise ValueError("graph needs exactly one source and one sink")
    # cycle check via depth-first search colors
    color = {u: 0 for u in nodes}

    def visit(u):
        color[u] = 1
        for i in adjacency[u]:
            v = edges[i][1]
            if color[v] == 1:
                raise ValueError("graph contains a cycle")
            if color[v] == 0:
                visit(v)
        color[u] = 2

    for u in nodes:
        if color[u] == 0:
            visit(u)
    return adjacency, sources[0], sinks[0]


def gridpath_aco_suite(edges: Sequence[tuple], ants: int = 4,
                       iterations: int = 20,
                       log: Optional[list] = None) -> FunctionSuite:
    """Ant colony searching cheapest source-to-sink paths in a DAG.

    ``edges`` is a sequence of ``(u, v, cost)`` triples; solutions are
    tuples of edge indices.  Deposits are ``1 / path cost``; sampling
    weights are pheromone plus one so fresh edges stay reachable.
    """
    if ants < 1:
        raise ValueError("ants must be at least 1")
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    edges = tuple((u, v, float(c)) for u, v, c in edges)
    adjacency, source, sink = validate_graph(edges)

    def path_cost(path):
        return sum(edges[i][2] for i in path)

    def sample_path(weights, rng):
        node = source
        path = []
        while node != sink:
            out = adjacency[node]
            w = [weights[i] for i in out]
            choice = rng.choices(out, weights=w, k=1)[0]
            path.append(choice)
            node = edges[choice][1]
        return tuple(path)

    def sample_all(state, rng):
        pheromone = state.fpw
        if pheromone is ABSENT:
            weights = [1.0] * len(edges)
        else:
            weights = [p + 1.0 for p in pheromone]
        return tuple(sample_path(weights, rng) for _ in range(ants))

    def init(_algorithm):
        return {"iteration": 0}

    def set_problem(pexp, state, rng):
        problem = tuple((u, v, float(c)) for u, v, c in pexp)
        validate_graph(problem)
        return problem, state.extra

    def generate(state, rng):
        return sample_all(state, rng), state.extra

    def next_gen(state, rng):
        return sample_all(state, rng), state.extra

    def simulate(state, rng):
        sols = present(state.sols, "Sols")
        pheromone = state.fpw
        levels = ([0.0] * len(edges) if pheromone is ABSENT
                  else list(pheromone))
        for path in sols:
            deposit = 1.0 / path_cost(path)
            for i in path:
                levels[i] += deposit
        extra = dict(state.extra)
        extra["iteration"] += 1
        return tuple(levels), extra

    def update_best(state, rng):
        sols = present(state.sols, "Sols")
        champion = min(sols, key=path_cost)
        best = state.best
        if best is ABSENT or path_cost(champion) < path_cost(best):
            best = champion
        if log is not None:
            log.append((state.extra["iteration"], path_cost(best)))
        return best, state.extra

    def aeval(state, rng):
        raise AssertionError("evaluate is expanded; aeval is never called")

    def stop(state):
        return state.extra["iteration"] > iterations

    return FunctionSuite(
        algorithm="aco",
        init=init,
        set_problem=set_problem,
        generate=generate,
        aeval=aeval,
        beval=aeval,
        stop_criterion=stop,
        next_gen=next_gen,
        instance_fns={
            "simulate": ("fpw", simulate),
            "updateBest": ("best", update_best),
        },
        expansions={"evaluate": ("simulate", "updateBest")},
    )


def sphere_pso_suite(dim: int, particles: int = 6, inertia: float = 0.7,
                     cognitive: float = 1.5, social: float = 1.5,
                     iterations: int = 40, bound: float = 5.0,
                     tol: float = 0.0,
                     log: Optional[list] = None) -> FunctionSuite:
    """Particle swarm minimizing ``sum(x_i^2)`` over ``[-bound, bound]^dim``.

    Solutions are ``(position, velocity)`` pairs of numpy arrays.  The
    incumbent best is stored as ``(position, value)``.  The three
    movement phases are separate statements: ``divert`` adds inertia and
    noise to the velocity only, ``aim`` pulls the velocity toward the
    personal and global bests, ``move`` adds the velocity to the position.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if particles < 1:
        raise ValueError("particles must be at least 1")
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    if bound <= 0:
        raise ValueError("bound must be positive")

    def value(pos):
        return float(np.dot(pos, pos))

    def init(_algorithm):
        return {"iteration": 0, "pbest": None}

    def set_problem(pexp, state, rng):
        size = int(pexp)
        if size != dim:
            raise ValueError("problem dimension disagrees with the suite's dim")
        return size, state.extra

    def generate(state, rng):
        swarm = []
        for _ in range(particles):
            pos = np.array([rng.uniform(-bound, bound) for _ in range(dim)])
            vel = np.zeros(dim)
            swarm.append((pos, vel))
        return tuple(swarm), state.extra

    def aeval(state, rng):
        sols = present(state.sols, "Sols")
        values = tuple(value(pos) for pos, _vel in sols)
        extra = dict(state.extra)
        extra["iteration"] += 1
        pbest = extra["pbest"]
        if pbest is None:
            pbest = tuple((pos.copy(), val)
                          for (pos, _vel), val in zip(sols, values))
        else:
            pbest = tuple(
                (pos.copy(), val) if val < old_val else (old_pos, old_val)
                for (pos, _vel), val, (old_pos, old_val)
                in zip(sols, values, pbest))
        extra["pbest"] = pbest
        return values, extra

    def beval(state, rng):
        sols = present(state.sols, "Sols")
        values = present(state.fpw, "FPW")
        champion = min(range(len(sols)), key=lambda i: values[i])
        best = state.best
        if best is ABSENT or values[champion] < best[1]:
            best = (sols[champion][0].copy(), values[champion])
        if log is not None:
            log.append((state.extra["iteration"], best[1]))
        return best, state.extra

    def divert(state, rng):
        sols = present(state.sols, "Sols")
        out = []
        for pos, vel in sols:
            noise = np.array([rng.uniform(-0.1, 0.1) for _ in range(dim)])
            out.append((pos, inertia * vel + noise))
        return tuple(out), state.extra

    def aim(state, rng):
        sols = present(state.sols, "Sols")
        gbest = present(state.best, "Best")[0]
        pbest = state.extra["pbest"]
        out = []
        for (pos, vel), (ppos, _pval) in zip(sols, pbest):
            pull = (cognitive * rng.random() * (ppos - pos)
                    + social * rng.random() * (gbest - pos))
            out.append((pos, vel + pull))
        return tuple(out), state.extra

    def move(state, rng):
        sols = present(state.sols, "Sols")
        out = tuple((pos + vel, vel) for pos, vel in sols)
        return out, state.extra

    def stop(state):
        best = state.best
        if best is not ABSENT and best[1] <= tol:
            return True
        return state.extra["iteration"] > iterations

    return FunctionSuite(
        algorithm="pso",
        init=init,
        set_problem=set_problem,
        generate=generate,
        aeval=aeval,
        beval=beval,
        stop_criterion=stop,
        instance_fns={
            "divert": ("sols", divert),
            "aim": ("sols", aim),
            "move": ("sols", move),
        },
        expansions={"nextGen": ("divert", "aim", "move")},
    )
