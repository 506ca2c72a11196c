"""
Benchmark instance generation - mazes, BFS subgraphs, random graphs and the
any-pair reduction
"""

from collections import deque
from fractions import Fraction
from typing import List, Optional, Set

import structlog

from ..core.config import get_settings
from ..core.exceptions import (
    ComponentTooSmallError,
    InvalidParameterError,
    UnsatisfiableMazeError,
)
from ..core.rng import SplitMix64
from ..models.graph import Graph, Instance
from ..models.maze import MazeGrid

logger = structlog.get_logger(__name__)


def obstacle_count(n: int, fill: float) -> int:
    """floor(fill * n^2), computed on the decimal value of `fill`."""
    return int(Fraction(str(fill)) * n * n)


def _start_target_connected(side: int, blocked: List[List[bool]]) -> bool:
    target = (side - 1, side - 1)
    seen = {(0, 0)}
    queue = deque([(0, 0)])
    while queue:
        r, c = queue.popleft()
        if (r, c) == target:
            return True
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < side and 0 <= nc < side and not blocked[nr][nc] and (nr, nc) not in seen:
                seen.add((nr, nc))
                queue.append((nr, nc))
    return False


def generate_maze(
    n: int,
    fill: float,
    seed: int,
    retry_budget: Optional[int] = None,
) -> MazeGrid:
    """Random n x n maze with exactly floor(fill * n^2) obstacles.

    Obstacles are drawn without replacement from all cells except start and
    target; a draw whose start and target end up disconnected is discarded and
    redrawn with seed + 1.
    """
    if n < 2:
        raise InvalidParameterError("Maze side must be at least 2", details={"n": n})
    if not 0 <= fill < 1:
        raise InvalidParameterError("Fill must lie in [0, 1)", details={"fill": fill})
    count = obstacle_count(n, fill)
    if count > n * n - 2:
        raise InvalidParameterError("Too many obstacles for the grid", details={"count": count})
    retry_budget = retry_budget or get_settings().MAZE_RETRY_BUDGET

    candidates = [(r, c) for r in range(n) for c in range(n)][1:-1]
    for attempt in range(retry_budget):
        rng = SplitMix64(seed + attempt)
        blocked = [[False] * n for _ in range(n)]
        for r, c in rng.sample(candidates, count):
            blocked[r][c] = True
        if _start_target_connected(n, blocked):
            if attempt:
                logger.debug("Maze redrawn", n=n, fill=fill, seed=seed, attempts=attempt + 1)
            return MazeGrid(n, tuple(tuple(row) for row in blocked), seed)

    raise UnsatisfiableMazeError(
        "No connected maze within the retry budget",
        details={"n": n, "fill": fill, "seed": seed, "retries": retry_budget},
    )


def maze_to_instance(maze: MazeGrid) -> Instance:
    """One vertex per free cell (row-major), unit edges between 4-neighbors."""
    ids = {cell: i for i, cell in enumerate(maze.free_cells())}
    edges = []
    for (r, c), u in ids.items():
        for nbr in ((r, c + 1), (r + 1, c)):
            v = ids.get(nbr)
            if v is not None:
                edges.append((u, v, 1))
    graph = Graph.from_edges(len(ids), edges)
    return Instance(
        graph,
        ids[maze.start],
        ids[maze.target],
        name=f"maze-n{maze.side}-o{maze.obstacle_count}-s{maze.seed}",
    )


def _bfs_touched(g: Graph, root: int, size: int) -> List[int]:
    touched = [root]
    seen: Set[int] = {root}
    queue = deque([root])
    while queue and len(touched) < size:
        u = queue.popleft()
        for v, _ in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                touched.append(v)
                queue.append(v)
                if len(touched) == size:
                    break
    return touched


def extract_bfs_subgraph(
    g: Graph,
    size: int,
    seed: int,
    root: Optional[int] = None,
    retry_budget: Optional[int] = None,
) -> Instance:
    """Instance induced by the first `size` vertices touched by a BFS.

    The root is a seeded uniform draw (or `root` when given) and becomes the
    source; the target is drawn uniformly from the other touched vertices.
    Ids are remapped to BFS discovery order.
    """
    if g.n == 0:
        raise InvalidParameterError("Cannot extract from an empty graph")
    if not 2 <= size <= g.n:
        raise InvalidParameterError("Subgraph size must lie in [2, n]", details={"size": size, "n": g.n})
    retry_budget = retry_budget or get_settings().SUBGRAPH_RETRY_BUDGET
    rng = SplitMix64(seed)

    attempts = 1 if root is not None else retry_budget
    for attempt in range(attempts):
        start = root if root is not None else rng.below(g.n)
        touched = _bfs_touched(g, start, size)
        if len(touched) < size:
            logger.debug("BFS component too small", root=start, touched=len(touched), size=size)
            continue
        target = 1 + rng.below(size - 1)
        sub = g.induced_subgraph(touched)
        return Instance(sub, 0, target, name=f"subgraph-r{start}-z{size}-s{seed}")

    raise ComponentTooSmallError(
        "No BFS root reached the requested size",
        details={"size": size, "seed": seed, "retries": attempts},
    )


def anypair_reduction(g: Graph) -> Instance:
    """Add s and t joined to every vertex by weight-0 edges (not to each other)."""
    if g.n < 1:
        raise InvalidParameterError("Any-pair reduction needs at least one vertex")
    n = g.n
    edges = g.edges()
    edges.extend((v, n, 0) for v in range(n))
    edges.extend((v, n + 1, 0) for v in range(n))
    return Instance(Graph.from_edges(n + 2, edges), n, n + 1, name=f"anypair-n{n}")


def generate_random_graph(n: int, p: float, max_weight: int, seed: int) -> Graph:
    """Seeded G(n, p) graph with integer weights drawn from 1..max_weight."""
    if n < 0 or not 0 <= p <= 1 or max_weight < 1:
        raise InvalidParameterError(
            "Random graph needs n >= 0, p in [0, 1], max_weight >= 1",
            details={"n": n, "p": p, "max_weight": max_weight},
        )
    rng = SplitMix64(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, 1 + rng.below(max_weight)))
    return Graph.from_edges(n, edges)


def random_instance(n: int, p: float, max_weight: int, seed: int) -> Instance:
    """Random graph with seeded distinct endpoints."""
    if n < 2:
        raise InvalidParameterError("Random instances need at least two vertices")
    graph = generate_random_graph(n, p, max_weight, seed)
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    s = rng.below(n)
    t = (s + 1 + rng.below(n - 1)) % n
    return Instance(graph, s, t, name=f"random-n{n}-p{p}-s{seed}")
