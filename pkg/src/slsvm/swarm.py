"""Universal swarm heuristics over tile sequences.

The ant colony grows a tree of tile indices rooted at the initial tile:
ants walk edges with pheromone-proportional probability, legal leaf
extensions get reinforced and expanded, illegal ones are remembered in a
per-node blacklist.  The particle swarm keeps one incumbent tile sequence
that every particle copies and tries to extend by a single random tile.
Both reconstruct the same computation history the universal GA does.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .mpcp import TileSet, compile_tiles, fits_overhang, viable_overhang
from .tm import ACCEPTED, BUDGET_EXHAUSTED, History, TuringMachine
from .uga import STALLED, decode_history


class SwarmError(Exception):
    pass


class _Node:
    """One tree node; ``pheromone`` belongs to the edge from the parent.

    ``overhang`` caches the unmatched bottom suffix of the path from the
    root through this node; it is filled in when the node is validated
    and expanded, so walks never re-concatenate whole paths.
    """

    __slots__ = ("tile_index", "parent", "depth", "pheromone", "children",
                 "failed", "expanded", "overhang")

    def __init__(self, tile_index: Optional[int], parent: Optional["_Node"]):
        self.tile_index = tile_index
        self.parent = parent
        self.depth = 0 if parent is None else parent.depth + 1
        self.pheromone = 0.0
        self.children: dict = {}
        self.failed: set = set()
        self.expanded = False
        self.overhang: Optional[tuple] = None


class TileTree:
    """Search tree of tile-index paths, shared by all ants of a run."""

    def __init__(self, tile_set: TileSet):
        self.tile_set = tile_set
        self.root = _Node(None, None)
        self.root.expanded = True
        self.root.overhang = ()
        self.root.children = {0: _Node(0, self.root)}
        self.node_count = 2
        self.max_reinforced_depth = 0
        self.solution: Optional[list] = None
        self.all_dead = False
        # deepest node whose every ancestor admits a single choice; walks
        # may start here because no randomness is consumed above it
        self.frontier = self.root

    def expand(self, node: _Node, overhang) -> None:
        node.expanded = True
        node.overhang = tuple(overhang)
        node.children = {
            i: _Node(i, node) for i in range(1, self.tile_set.count)}
        self.node_count += self.tile_set.count - 1

    def path_indices(self, node: _Node) -> list:
        out = []
        while node.parent is not None:
            out.append(node.tile_index)
            node = node.parent
        out.reverse()
        return out

    def edge_pheromones(self) -> dict:
        """Snapshot mapping root paths (tuples of tile indices) to the
        pheromone on their last edge."""
        out = {}
        stack = [(self.root, ())]
        while stack:
            node, path = stack.pop()
            for idx, child in node.children.items():
                child_path = path + (idx,)
                out[child_path] = child.pheromone
                stack.append((child, child_path))
        return out


def _candidates(node: _Node, blacklist_enabled: bool):
    return [(idx, child) for idx, child in node.children.items()
            if not (blacklist_enabled and idx in node.failed)]


def _choose(candidates, rng):
    if len(candidates) == 1:
        return candidates[0]
    pheromones = [child.pheromone for _, child in candidates]
    positive = [p for p in pheromones if p > 0]
    if not positive:
        weights = [1.0] * len(candidates)
    else:
        floor_weight = min(positive) / len(candidates)
        weights = [p if p > 0 else floor_weight for p in pheromones]
    return rng.choices(candidates, weights=weights, k=1)[0]


def _advance_frontier(tree: TileTree, blacklist_enabled: bool) -> None:
    while True:
        candidates = _candidates(tree.frontier, blacklist_enabled)
        if len(candidates) != 1 or not candidates[0][1].expanded:
            return
        tree.frontier = candidates[0][1]


def _walk(tree: TileTree, tile_set: TileSet, rng,
          blacklist_enabled: bool) -> dict:
    """One ant's descent.  Returns the pending updates, applied later."""
    node = tree.frontier
    edges: list = []
    while True:
        candidates = _candidates(node, blacklist_enabled)
        if not candidates:
            return {"dead_end": True}
        idx, child = _choose(candidates, rng)
        edges.append(child)
        if child.expanded:
            node = child
            continue
        viable, new_overhang, complete = viable_overhang(
            tile_set, tile_set.tiles[idx], node.overhang)
        if not viable:
            return {"dead_end": False, "failure": (node, idx)}
        record = {"dead_end": False, "reinforce": edges, "expand": child,
                  "overhang": new_overhang}
        if complete and idx in tile_set.closing_indices:
            record["solution"] = tree.path_indices(child)
        return record


def aco_iteration(tree: TileTree, tile_set: TileSet, ants: int, rng,
                  blacklist_enabled: bool = True) -> TileTree:
    """Run one iteration: all ants walk first, updates land afterwards.

    Returns the tree; sets ``tree.solution`` when a complete solution
    ending in a closing tile is found, and ``tree.all_dead`` when every
    ant of the iteration stopped at a node with no admissible child.
    """
    _advance_frontier(tree, blacklist_enabled)
    records = [_walk(tree, tile_set, rng, blacklist_enabled)
               for _ in range(ants)]
    for record in records:
        failure = record.get("failure")
        if failure is not None:
            node, idx = failure
            node.failed.add(idx)
        for child in record.get("reinforce", ()):
            child.pheromone += 1.0
        expand = record.get("expand")
        if expand is not None and not expand.expanded:
            tree.expand(expand, record["overhang"])
        if "reinforce" in record:
            tree.max_reinforced_depth = max(
                tree.max_reinforced_depth, record["reinforce"][-1].depth)
        if record.get("solution") is not None and tree.solution is None:
            tree.solution = record["solution"]
    tree.all_dead = all(r["dead_end"] for r in records)
    return tree


@dataclass
class SwarmStats:
    iterations: int = 0
    nodes: int = 0
    max_depth: int = 0

    def render(self) -> str:
        return (f"iterations={self.iterations} nodes={self.nodes} "
                f"max_depth={self.max_depth}")


@dataclass
class SwarmResult:
    status: str  # tm.ACCEPTED, tm.BUDGET_EXHAUSTED, or uga.STALLED
    history: Optional[History]
    stats: SwarmStats
    solution: Optional[tuple] = None


def aco_run_universal(tm: TuringMachine, input_string: str, ants: int = 4,
                      budget: int = 10000, seed: int = 0,
                      blacklist_enabled: bool = True) -> SwarmResult:
    """Simulate ``(tm, input_string)`` with the ant colony.

    ``budget`` counts iterations (each of ``ants`` walks).
    """
    if ants < 1:
        raise ValueError("ants must be at least 1")
    tile_set = compile_tiles(tm, input_string)
    tree = TileTree(tile_set)
    rng = random.Random(seed)
    stats = SwarmStats()
    for _ in range(budget):
        aco_iteration(tree, tile_set, ants, rng, blacklist_enabled)
        stats.iterations += 1
        if tree.solution is not None:
            stats.nodes = tree.node_count
            stats.max_depth = tree.max_reinforced_depth
            history = decode_history(tile_set, tree.solution)
            return SwarmResult(ACCEPTED, history, stats,
                               solution=tuple(tree.solution))
        if blacklist_enabled and tree.all_dead:
            stats.nodes = tree.node_count
            stats.max_depth = tree.max_reinforced_depth
            return SwarmResult(STALLED, None, stats)
    stats.nodes = tree.node_count
    stats.max_depth = tree.max_reinforced_depth
    return SwarmResult(BUDGET_EXHAUSTED, None, stats)


def pso_run_universal(tm: TuringMachine, input_string: str,
                      particles: int = 4, budget: int = 10000, seed: int = 0,
                      blacklist_enabled: bool = True) -> SwarmResult:
    """Simulate ``(tm, input_string)`` with the particle swarm.

    Each iteration, every particle copies the incumbent best sequence and
    appends one random non-blacklisted tile; a particle that extends the
    chain legally becomes the new best and clears the blacklist.
    """
    if particles < 1:
        raise ValueError("particles must be at least 1")
    tile_set = compile_tiles(tm, input_string)
    rng = random.Random(seed)
    stats = SwarmStats()

    best = [0]
    fits, overhang = fits_overhang(tile_set.tiles[0], ())
    if not fits:
        raise SwarmError("initial tile is not a partial solution")
    blacklist: set = set()
    stats.max_depth = 1

    for _ in range(budget):
        stats.iterations += 1
        draws = []
        for _p in range(particles):
            pool = [i for i in range(1, tile_set.count)
                    if not (blacklist_enabled and i in blacklist)]
            if not pool:
                return SwarmResult(STALLED, None, stats)
            draws.append(rng.choice(pool))
        advanced = None
        for idx in draws:
            viable, new_overhang, complete = viable_overhang(
                tile_set, tile_set.tiles[idx], overhang)
            if viable:
                advanced = (idx, new_overhang, complete)
            elif blacklist_enabled:
                blacklist.add(idx)
        if advanced is None:
            continue
        idx, overhang, complete = advanced
        best.append(idx)
        blacklist.clear()
        stats.max_depth = len(best)
        if complete and idx in tile_set.closing_indices:
            history = decode_history(tile_set, best)
            return SwarmResult(ACCEPTED, history, stats,
                               solution=tuple(best))
    return SwarmResult(BUDGET_EXHAUSTED, None, stats)
