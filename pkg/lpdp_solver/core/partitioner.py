"""
Partitioning - balanced k-way partitions and the block hierarchy LPDP combines over

Partitions come from multilevel recursive bisection: heavy-edge matching
coarsens the subgraph, seeded greedy region growing bisects the coarsest level,
and boundary Fiduccia-Mattheyses passes refine every level on the way back.
The recursion tree is the hierarchy.
"""

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import structlog

from ..models.graph import Graph
from .budget import SearchBudget
from .exceptions import (
    BalanceViolatedError,
    BoundaryTooLargeError,
    InfeasibleBalanceError,
    InvalidParameterError,
    LineCountMismatchError,
    NonContiguousBlockIdsError,
)
from .rng import SplitMix64

logger = structlog.get_logger(__name__)

# Region-growing trials and FM rounds per preset
PRESETS: Dict[str, Tuple[int, int]] = {
    "eco": (4, 3),
    "strong": (16, 10),
}
COARSEN_TARGET = 24
FM_PATIENCE = 64


def max_block_size(n: int, k: int, epsilon: float) -> int:
    """L_max = floor((1 + epsilon) * ceil(n / k))."""
    return int((1 + Fraction(str(epsilon))) * math.ceil(n / k))


def default_k(n: int, leaf_target: int = 64) -> int:
    """max(2, 2^ceil(log2(n / leaf_target))), clamped to n."""
    if n <= 1:
        return 1
    k = 2 if n <= leaf_target else 1 << math.ceil(math.log2(n / leaf_target))
    k = max(2, k)
    while k > n:
        k //= 2
    return max(1, k)


@dataclass(frozen=True)
class Partition:
    """Block id per vertex."""

    block_of: Tuple[int, ...]
    k: int
    epsilon: float = 0.10

    @property
    def n(self) -> int:
        return len(self.block_of)

    def blocks(self) -> List[List[int]]:
        blocks: List[List[int]] = [[] for _ in range(self.k)]
        for v, b in enumerate(self.block_of):
            blocks[b].append(v)
        return blocks

    def block_sizes(self) -> List[int]:
        sizes = [0] * self.k
        for b in self.block_of:
            sizes[b] += 1
        return sizes

    @property
    def l_max(self) -> int:
        return max_block_size(self.n, self.k, self.epsilon)

    def is_balanced(self) -> bool:
        return max(self.block_sizes(), default=0) <= self.l_max


@dataclass(frozen=True)
class HierarchyNode:
    id: int
    vertices: FrozenSet[int]
    children: Tuple[int, ...] = ()
    parent: Optional[int] = None
    level: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Hierarchy:
    """Rooted tree of blocks; leaf node ids equal partition block ids."""

    nodes: Tuple[HierarchyNode, ...]
    root: int

    @property
    def leaves(self) -> List[HierarchyNode]:
        return [node for node in self.nodes if node.is_leaf]

    def node(self, node_id: int) -> HierarchyNode:
        return self.nodes[node_id]

    @property
    def height(self) -> int:
        return self.nodes[self.root].level

    def by_level(self) -> List[List[int]]:
        """Node ids grouped by level, leaves first."""
        levels: List[List[int]] = [[] for _ in range(self.height + 1)]
        for node in self.nodes:
            levels[node.level].append(node.id)
        return levels

    def validate(self) -> None:
        """Assert children partition their parent and every non-root node has one parent."""
        for node in self.nodes:
            if node.children:
                union: set = set()
                for c in node.children:
                    child = self.nodes[c]
                    assert child.parent == node.id, f"node {c} has wrong parent"
                    assert not (union & child.vertices), f"children of {node.id} overlap"
                    union |= child.vertices
                assert union == node.vertices, f"children of {node.id} do not cover it"
            if node.id != self.root:
                assert node.parent is not None, f"node {node.id} has no parent"
        assert self.nodes[self.root].parent is None

    @classmethod
    def assemble(cls, leaf_sets: Sequence[Sequence[int]], merges: Sequence[Tuple[int, ...]]) -> "Hierarchy":
        """Leaves get ids 0..k-1; merge i creates node k+i over the given child ids."""
        vertices: List[FrozenSet[int]] = [frozenset(vs) for vs in leaf_sets]
        children: List[Tuple[int, ...]] = [()] * len(leaf_sets)
        for group in merges:
            vertices.append(frozenset().union(*(vertices[c] for c in group)))
            children.append(tuple(group))
        parent: List[Optional[int]] = [None] * len(vertices)
        level = [0] * len(vertices)
        for node_id, group in enumerate(children):
            for c in group:
                parent[c] = node_id
            if group:
                level[node_id] = 1 + max(level[c] for c in group)
        nodes = tuple(
            HierarchyNode(i, vertices[i], children[i], parent[i], level[i]) for i in range(len(vertices))
        )
        roots = [i for i in range(len(nodes)) if parent[i] is None]
        if len(roots) != 1:
            raise ValueError(f"hierarchy must have one root, found {len(roots)}")
        return cls(nodes, roots[0])

    @classmethod
    def flat(cls, partition: Partition) -> "Hierarchy":
        """Single combination level: the root directly over all leaf blocks."""
        merges = [tuple(range(partition.k))] if partition.k > 1 else []
        return cls.assemble(partition.blocks(), merges)


def cut_weight(g: Graph, p: Partition) -> int:
    """Total weight of edges whose endpoints lie in different blocks."""
    return sum(w for u, v, w in g.edges() if p.block_of[u] != p.block_of[v])


def boundary_size(g: Graph, vertices: FrozenSet[int]) -> int:
    """Vertices of the set with at least one neighbor outside it."""
    return sum(1 for v in vertices if any(u not in vertices for u, _ in g.neighbors(v)))


# Multilevel bisection


@dataclass
class _LevelGraph:
    adjacency: List[Dict[int, int]]
    vertex_weight: List[int]
    coarse_of: List[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def total(self) -> int:
        return sum(self.vertex_weight)


def _cut(lg: _LevelGraph, side: List[int]) -> int:
    return sum(w for u, nbrs in enumerate(lg.adjacency) for v, w in nbrs.items() if u < v and side[u] != side[v])


def _coarsen(lg: _LevelGraph, rng: SplitMix64) -> Optional[_LevelGraph]:
    """Heavy-edge matching; None when the graph no longer shrinks."""
    cap = max(2, lg.total // 16)
    order = list(range(lg.n))
    rng.shuffle(order)
    mate = [-1] * lg.n
    for u in order:
        if mate[u] >= 0:
            continue
        best, best_w = -1, -1
        for v, w in sorted(lg.adjacency[u].items()):
            if mate[v] < 0 and v != u and lg.vertex_weight[u] + lg.vertex_weight[v] <= cap and w > best_w:
                best, best_w = v, w
        if best >= 0:
            mate[u], mate[best] = best, u
        else:
            mate[u] = u

    coarse_of = [-1] * lg.n
    weights: List[int] = []
    for u in range(lg.n):
        if coarse_of[u] < 0:
            coarse_of[u] = coarse_of[mate[u]] = len(weights)
            weights.append(lg.vertex_weight[u] + (lg.vertex_weight[mate[u]] if mate[u] != u else 0))
    if len(weights) > 0.9 * lg.n:
        return None

    adjacency: List[Dict[int, int]] = [dict() for _ in weights]
    for u, nbrs in enumerate(lg.adjacency):
        cu = coarse_of[u]
        for v, w in nbrs.items():
            cv = coarse_of[v]
            if cu != cv:
                adjacency[cu][cv] = adjacency[cu].get(cv, 0) + w
    lg.coarse_of = coarse_of
    return _LevelGraph(adjacency, weights)


def _peripheral(lg: _LevelGraph, start: int) -> int:
    """Farthest vertex (BFS hops, smallest id on ties) after two sweeps."""
    for _ in range(2):
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(lg.adjacency[u]):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        far = max(dist.values())
        start = min(v for v, d in dist.items() if d == far)
    return start


def _grow_region(lg: _LevelGraph, seed_vertex: int, lo: int, hi: int) -> List[int]:
    """Greedy region growing: side 0 absorbs the frontier vertex of highest gain."""
    side = [1] * lg.n
    target = min(hi, max(lo, lg.total // 2))
    weight = 0
    gain = [0] * lg.n
    heap: List[Tuple[int, int]] = []

    def absorb(u: int) -> None:
        nonlocal weight
        side[u] = 0
        weight += lg.vertex_weight[u]
        for v, w in lg.adjacency[u].items():
            if side[v] == 1:
                gain[v] += 2 * w
                heapq.heappush(heap, (-gain[v], v))

    for u in range(lg.n):
        gain[u] = -sum(lg.adjacency[u].values())
    current = seed_vertex
    while weight < target:
        if current >= 0 and weight + lg.vertex_weight[current] <= hi:
            absorb(current)
        current = -1
        while heap:
            neg, v = heapq.heappop(heap)
            if side[v] == 1 and -neg == gain[v] and weight + lg.vertex_weight[v] <= hi:
                current = v
                break
        if current < 0:
            rest = [v for v in range(lg.n) if side[v] == 1 and weight + lg.vertex_weight[v] <= hi]
            if not rest:
                break
            current = rest[0]
    return side


def _rebalance(lg: _LevelGraph, side: List[int], lo: int, hi: int) -> None:
    """Move best-gain vertices off the heavy side until side 0 weighs within [lo, hi]."""
    w0 = sum(w for w, s in zip(lg.vertex_weight, side) if s == 0)
    while not lo <= w0 <= hi:
        source = 0 if w0 > hi else 1
        best, best_gain = -1, None
        for v in range(lg.n):
            if side[v] != source:
                continue
            vw = lg.vertex_weight[v]
            new_w0 = w0 - vw if source == 0 else w0 + vw
            overshoot = new_w0 < lo if source == 0 else new_w0 > hi
            if overshoot:
                continue
            gain = sum(w if side[u] != source else -w for u, w in lg.adjacency[v].items())
            if best_gain is None or gain > best_gain:
                best, best_gain = v, gain
        if best < 0:
            return
        side[best] = 1 - source
        w0 = w0 - lg.vertex_weight[best] if source == 0 else w0 + lg.vertex_weight[best]


def _fm_pass(lg: _LevelGraph, side: List[int], lo: int, hi: int) -> bool:
    """One Fiduccia-Mattheyses pass; keeps the best balanced prefix of moves."""
    gain = [
        sum(w if side[v] != side[u] else -w for v, w in lg.adjacency[u].items())
        for u in range(lg.n)
    ]
    heap = [(-gain[u], u) for u in range(lg.n) if any(side[v] != side[u] for v in lg.adjacency[u])]
    heapq.heapify(heap)
    w0 = sum(w for w, s in zip(lg.vertex_weight, side) if s == 0)
    locked = [False] * lg.n
    moves: List[int] = []
    cut_delta = best_delta = 0
    best_len = 0

    while heap:
        neg, u = heapq.heappop(heap)
        if locked[u] or -neg != gain[u]:
            continue
        vw = lg.vertex_weight[u]
        new_w0 = w0 - vw if side[u] == 0 else w0 + vw
        if not lo <= new_w0 <= hi:
            continue
        dest = 1 - side[u]
        side[u] = dest
        w0 = new_w0
        cut_delta -= gain[u]
        locked[u] = True
        moves.append(u)
        for v, w in lg.adjacency[u].items():
            if locked[v]:
                continue
            gain[v] += -2 * w if side[v] == dest else 2 * w
            heapq.heappush(heap, (-gain[v], v))
        gain[u] = -gain[u]
        if cut_delta < best_delta:
            best_delta, best_len = cut_delta, len(moves)
        elif len(moves) - best_len > FM_PATIENCE:
            break

    for u in moves[best_len:]:
        side[u] = 1 - side[u]
    return best_len > 0


def _refine(lg: _LevelGraph, side: List[int], lo: int, hi: int, rounds: int) -> None:
    _rebalance(lg, side, lo, hi)
    for _ in range(rounds):
        if not _fm_pass(lg, side, lo, hi):
            break


def _multilevel_bisect(
    g: Graph,
    vertices: Sequence[int],
    lo: int,
    hi: int,
    seed: int,
    preset: str,
    budget: Optional[SearchBudget] = None,
) -> Tuple[List[int], List[int]]:
    """Split `vertices` in two with |side 0| in [lo, hi], minimizing cut weight."""
    budget = budget or SearchBudget()
    trials, rounds = PRESETS[preset]
    rng = SplitMix64(seed)
    local = {v: i for i, v in enumerate(vertices)}
    base = _LevelGraph(
        [{local[u]: w for u, w in g.neighbors(v) if u in local} for v in vertices],
        [1] * len(vertices),
    )

    levels = [base]
    while levels[-1].n > COARSEN_TARGET:
        coarse = _coarsen(levels[-1], rng)
        if coarse is None:
            break
        levels.append(coarse)

    coarsest = levels[-1]
    best_side: Optional[List[int]] = None
    best_key: Optional[Tuple[int, int]] = None
    for _ in range(trials):
        budget.check()
        start = _peripheral(coarsest, rng.below(coarsest.n))
        side = _grow_region(coarsest, start, lo, hi)
        _refine(coarsest, side, lo, hi, rounds)
        w0 = sum(w for w, s in zip(coarsest.vertex_weight, side) if s == 0)
        key = (0 if lo <= w0 <= hi else 1, _cut(coarsest, side))
        if best_key is None or key < best_key:
            best_side, best_key = side, key

    side = best_side
    for finer in reversed(levels[:-1]):
        budget.check()
        side = [side[c] for c in finer.coarse_of]
        _refine(finer, side, lo, hi, rounds)

    _rebalance(base, side, lo, hi)
    part0 = [v for v, s in zip(vertices, side) if s == 0]
    part1 = [v for v, s in zip(vertices, side) if s == 1]
    assert lo <= len(part0) <= hi, "bisection left balance bounds"
    return part0, part1


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def partition_hier(
    g: Graph,
    k: int,
    epsilon: float = 0.10,
    seed: int = 0,
    preset: str = "eco",
    boundary_cap: Optional[int] = None,
    budget: Optional[SearchBudget] = None,
) -> Tuple[Partition, Hierarchy]:
    """Balanced k-way partition by recursive bisection plus its binary hierarchy.

    With `boundary_cap`, a bisection leaving a side with more boundary vertices
    than the cap is retried once with another seed; if some non-root block
    still exceeds the cap, BoundaryTooLargeError is raised. A `budget` deadline
    is checked between bisection trials and raises SearchTimeout.
    """
    budget = budget or SearchBudget()
    n = g.n
    if k > n:
        raise InfeasibleBalanceError("More blocks than vertices", details={"k": k, "n": n})
    if not _is_power_of_two(k):
        raise InvalidParameterError("k must be a power of two", details={"k": k})
    if preset not in PRESETS:
        raise InvalidParameterError(f"Unknown partition preset '{preset}'")
    l_max = max_block_size(n, k, epsilon)

    leaf_sets: List[List[int]] = []
    pending: List[Tuple[int, ...]] = []

    def split(vertices: List[int], leaves: int, node_seed: int) -> Tuple[str, int]:
        if leaves == 1:
            leaf_sets.append(vertices)
            return ("leaf", len(leaf_sets) - 1)
        half = leaves // 2
        m = len(vertices)
        lo = max(half, m - half * l_max)
        hi = min(half * l_max, m - half)
        left, right = _multilevel_bisect(g, vertices, lo, hi, node_seed, preset, budget)
        if boundary_cap is not None:
            worst = max(boundary_size(g, frozenset(left)), boundary_size(g, frozenset(right)))
            if worst > boundary_cap:
                alt_left, alt_right = _multilevel_bisect(g, vertices, lo, hi, node_seed + 7919, preset, budget)
                alt_worst = max(boundary_size(g, frozenset(alt_left)), boundary_size(g, frozenset(alt_right)))
                logger.debug("Re-bisected block over boundary cap", worst=worst, retry=alt_worst)
                if alt_worst < worst:
                    left, right = alt_left, alt_right
        a = split(sorted(left), half, 2 * node_seed + 1)
        b = split(sorted(right), half, 2 * node_seed + 2)
        pending.append((a, b))
        return ("merge", len(pending) - 1)

    split(list(range(n)), k, seed)

    # translate ("leaf", i) / ("merge", j) handles into hierarchy node ids
    def node_id(handle: Tuple[str, int]) -> int:
        kind, index = handle
        return index if kind == "leaf" else k + index

    merges = [tuple(node_id(h) for h in pair) for pair in pending]
    hierarchy = Hierarchy.assemble(leaf_sets, merges)

    block_of = [0] * n
    for b, vertices in enumerate(leaf_sets):
        for v in vertices:
            block_of[v] = b
    partition = Partition(tuple(block_of), k, epsilon)
    assert partition.is_balanced(), "leaf balance violated"

    if boundary_cap is not None:
        for node in hierarchy.nodes:
            if node.id == hierarchy.root:
                continue
            size = boundary_size(g, node.vertices)
            if size > boundary_cap:
                raise BoundaryTooLargeError(
                    "Block boundary exceeds the cap; use a smaller k or an external partition",
                    details={"block": node.id, "boundary": size, "cap": boundary_cap},
                )

    logger.info(
        "Partition built",
        n=n,
        k=k,
        epsilon=epsilon,
        preset=preset,
        cut=cut_weight(g, partition),
        levels=hierarchy.height,
    )
    return partition, hierarchy


def load_partition(
    text: bytes,
    g: Graph,
    epsilon: float = 0.10,
    allow_imbalance: bool = False,
) -> Partition:
    """Read one block id per vertex line (KaHIP/METIS partition file)."""
    lines = [line.strip() for line in text.decode("ascii").split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if len(lines) != g.n:
        raise LineCountMismatchError(
            "Partition file must hold one line per vertex",
            details={"lines": len(lines), "n": g.n},
        )
    try:
        block_of = tuple(int(line) for line in lines)
    except ValueError as e:
        raise NonContiguousBlockIdsError("Block ids must be integers") from e
    k = max(block_of, default=-1) + 1
    if k == 0 or set(block_of) != set(range(k)):
        raise NonContiguousBlockIdsError("Block ids must be exactly 0..k-1", details={"k": k})
    partition = Partition(block_of, k, epsilon)
    if not partition.is_balanced():
        details = {"max_block": max(partition.block_sizes()), "l_max": partition.l_max}
        if not allow_imbalance:
            raise BalanceViolatedError("Partition exceeds the balance constraint", details=details)
        logger.warning("Loaded partition is imbalanced", **details)
    return partition


def emit_partition(p: Partition) -> bytes:
    return "".join(f"{b}\n" for b in p.block_of).encode("ascii")


def hierarchy_from_partition(g: Graph, p: Partition) -> Hierarchy:
    """Binary hierarchy over a flat partition by greedily pairing the blocks
    joined by the heaviest cut."""
    groups: List[int] = list(range(p.k))
    members: Dict[int, FrozenSet[int]] = {b: frozenset([b]) for b in groups}
    merges: List[Tuple[int, ...]] = []
    next_id = p.k

    while len(groups) > 1:
        weight: Dict[Tuple[int, int], int] = {}
        owner = {b: grp for grp in groups for b in members[grp]}
        for u, v, w in g.edges():
            a, b = owner[p.block_of[u]], owner[p.block_of[v]]
            if a != b:
                key = (min(a, b), max(a, b))
                weight[key] = weight.get(key, 0) + w
        ordered = sorted(groups)
        candidates = sorted(
            ((a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:]),
            key=lambda pair: (-weight.get(pair, 0), pair),
        )
        paired: set = set()
        next_groups: List[int] = []
        for a, b in candidates:
            if a in paired or b in paired:
                continue
            paired.update((a, b))
            merges.append((a, b))
            members[next_id] = members[a] | members[b]
            next_groups.append(next_id)
            next_id += 1
        next_groups.extend(grp for grp in groups if grp not in paired)
        groups = next_groups

    return Hierarchy.assemble(p.blocks(), merges)
