"""
Brute-force reference solvers

`exhaustive_dfs` enumerates every simple s-t path and is the correctness oracle
for whole instances; `brute_force_block_table` enumerates every path system of
a small block view and is the oracle for block tables.
"""

import time
from typing import Dict, List, Optional, Tuple

import structlog

from ..models.graph import Instance
from ..models.solution import Solution, SolveStatus
from .budget import SearchBudget
from .exceptions import SearchTimeout, TooLargeError
from .lpdp.table import BlockTable, Witness
from .lpdp.views import BlockView

logger = structlog.get_logger(__name__)

MAX_ORACLE_BOUNDARY = 8
MAX_ORACLE_NODES = 16


def exhaustive_dfs(
    inst: Instance,
    time_limit: Optional[float] = None,
    budget: Optional[SearchBudget] = None,
) -> Solution:
    """Longest simple s-t path by depth-first search that unmarks vertices on backtrack.

    Neighbors are visited in ascending id so expansion counts are reproducible.
    """
    started = time.monotonic()
    budget = budget or SearchBudget.from_limit(time_limit)
    g, s, t = inst.graph, inst.source, inst.target

    on_path = [False] * g.n
    on_path[s] = True
    path = [s]
    next_index = [0]
    edge_weights: List[int] = []
    weight = 0
    best: Optional[int] = None
    best_path: Optional[List[int]] = None

    try:
        while path:
            v = path[-1]
            neighbors = g.adjacency[v]
            i = next_index[-1]
            if v == t or i >= len(neighbors):
                on_path[v] = False
                path.pop()
                next_index.pop()
                if edge_weights:
                    weight -= edge_weights.pop()
                continue
            next_index[-1] = i + 1
            u, w = neighbors[i]
            if on_path[u]:
                continue
            budget.tick()
            on_path[u] = True
            path.append(u)
            next_index.append(0)
            edge_weights.append(w)
            weight += w
            if u == t and (best is None or weight > best):
                best, best_path = weight, list(path)
    except SearchTimeout:
        logger.info("Exhaustive DFS timed out", instance=inst.name, expansions=budget.expansions)
        return Solution(
            status=SolveStatus.TIMEOUT,
            elapsed=time.monotonic() - started,
            expanded=budget.expansions,
        )

    elapsed = time.monotonic() - started
    if best is None:
        return Solution(status=SolveStatus.NO_PATH, elapsed=elapsed, expanded=budget.expansions)
    return Solution(
        status=SolveStatus.SOLVED,
        weight=best,
        path=best_path,
        elapsed=elapsed,
        expanded=budget.expansions,
    )


def _boundary_paths(
    view: BlockView,
    adjacency: Dict[int, List[Tuple[int, int]]],
    node_bit: Dict[int, int],
) -> Dict[int, List[Tuple[int, int, int, Tuple[int, ...]]]]:
    """Per boundary index i: every simple path to a higher-index boundary node
    as (j, node mask, weight, nodes)."""
    index = view.boundary_index()
    found: Dict[int, List[Tuple[int, int, int, Tuple[int, ...]]]] = {}

    for i, x in enumerate(view.boundary):
        paths: List[Tuple[int, int, int, Tuple[int, ...]]] = []

        def walk(v: int, mask: int, weight: int, trail: List[int]) -> None:
            for u, w in adjacency[v]:
                if mask & node_bit[u]:
                    continue
                trail.append(u)
                j = index.get(u)
                if j is not None and j > i:
                    paths.append((j, mask | node_bit[u], weight + w, tuple(trail)))
                walk(u, mask | node_bit[u], weight + w, trail)
                trail.pop()

        walk(x, node_bit[x], 0, [x])
        found[i] = paths
    return found


def brute_force_block_table(
    view: BlockView,
    max_boundary: int = MAX_ORACLE_BOUNDARY,
    max_nodes: int = MAX_ORACLE_NODES,
) -> BlockTable:
    """Table of `view` by naive enumeration of vertex-disjoint path systems
    on the block's induced subgraph."""
    if len(view.boundary) > max_boundary or len(view.flat_nodes) > max_nodes:
        raise TooLargeError(
            "View too large for brute-force enumeration",
            details={
                "boundary": len(view.boundary),
                "nodes": len(view.flat_nodes),
                "max_boundary": max_boundary,
                "max_nodes": max_nodes,
            },
        )

    adjacency = view.flat_adjacency()
    node_bit = {v: 1 << i for i, v in enumerate(view.flat_nodes)}
    boundary_bits = [node_bit[x] for x in view.boundary]
    paths_from = _boundary_paths(view, adjacency, node_bit)
    table = BlockTable(view.block, view.boundary)

    pairs: List[Tuple[int, int]] = []
    segments: List[Tuple[int, ...]] = []

    def systems(i: int, used: int, weight: int) -> None:
        if i == len(view.boundary):
            touched = 0
            for k, bit in enumerate(boundary_bits):
                if used & bit:
                    touched |= 1 << k
            table.offer(tuple(pairs), touched, weight, Witness(tuple(segments)))
            return
        systems(i + 1, used, weight)
        if used & boundary_bits[i]:
            return
        for j, mask, w, nodes in paths_from[i]:
            if mask & used:
                continue
            pairs.append((i, j))
            segments.append(nodes)
            systems(i + 1, used | mask, weight + w)
            segments.pop()
            pairs.pop()

    systems(0, 0, 0)
    table.freeze()
    return table
