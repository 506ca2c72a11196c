"""
Segment search: fills a block table by depth-first search over a block view

The search path is cut into segments, each running between two boundary nodes
of the block. Every time a segment closes the current set of segments is a
realizable boundary matching and is recorded; the search then either opens a
new segment at an unvisited boundary node or keeps extending the old one.

In coarse views an edge between two boundary nodes of the same child (a clique
edge) stands for a path through that child. The child's table decides whether
the accumulated child matching is still realizable, so infeasible branches are
cut early.
"""

import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

import structlog

from ..budget import SearchBudget
from ..monitoring import BLOCKS_PREPROCESSED
from .table import BlockTable, ChildChoice, Matching, Witness, canonical_matching
from .views import BlockView

logger = structlog.get_logger(__name__)


@dataclass
class CombineState:
    """Mutable state of one segment search."""

    visited: Set[int] = field(default_factory=set)
    segments: List[Tuple[int, ...]] = field(default_factory=list)
    weight: int = 0
    # per child: matched local index pairs and the mask of nodes used alone
    pairs: Dict[int, List[Tuple[int, int]]] = field(default_factory=dict)
    alone: Dict[int, int] = field(default_factory=dict)

    def child_matching(self, child: int) -> Matching:
        return canonical_matching(self.pairs[child])


class SegmentSearch:
    """Exhaustive segment DFS producing the exact table of one block view.

    With `symmetry_pruning`, a segment only ends at a boundary node with a
    larger id than its root and a new segment only starts above every earlier
    root, so each path system is enumerated once.
    """

    def __init__(
        self,
        view: BlockView,
        child_tables: Optional[Mapping[int, BlockTable]] = None,
        symmetry_pruning: bool = True,
        budget: Optional[SearchBudget] = None,
        entry_cap: Optional[int] = None,
    ):
        self.view = view
        self.leaf = view.is_leaf
        self.pruning = symmetry_pruning
        self.budget = budget or SearchBudget()
        self.index = view.boundary_index()
        self.adjacency = view.adjacency()
        self.table = BlockTable(view.block, view.boundary, entry_cap)
        self.state = CombineState()

        if not self.leaf:
            child_tables = child_tables or {}
            self.child_tables = {c: child_tables[c] for c in view.children}
            self.owner = view.owner
            self.child_index = {
                c: {x: i for i, x in enumerate(bd)} for c, bd in view.child_boundaries.items()
            }
            self.partners = {
                x: [u for u in view.child_boundaries[view.owner[x]] if u != x] for x in view.nodes
            }
            # child-local bit -> parent-local bit (0 when not on this block's boundary)
            self.parent_bits = {
                c: [1 << self.index[x] if x in self.index else 0 for x in bd]
                for c, bd in view.child_boundaries.items()
            }
            self.state.pairs = {c: [] for c in view.children}
            self.state.alone = {c: 0 for c in view.children}

    def run(self) -> BlockTable:
        self.table.offer((), 0, 0, Witness(()))
        if self.view.boundary:
            self._open(-1)
        self.table.freeze()
        return self.table

    # search

    def _open(self, last_root: int) -> None:
        visited = self.state.visited
        for r in self.view.boundary:
            if r in visited or (self.pruning and r <= last_root):
                continue
            visited.add(r)
            self._extend(r, r, [r], by_clique=False)
            visited.discard(r)

    def _extend(self, v: int, root: int, segment: List[int], by_clique: bool) -> None:
        self.budget.tick()
        child = None if self.leaf else self.owner[v]

        if len(segment) > 1 and v in self.index and (not self.pruning or v > root):
            if self.leaf or by_clique:
                self._close(segment, root)
            elif self._mark_alone(child, v):
                self._close(segment, root)
                self._unmark_alone(child, v)

        if self.leaf:
            self._cut_moves(v, root, segment)
            return
        if by_clique:
            # never two clique edges in a row at one node
            self._cut_moves(v, root, segment)
            return

        visited = self.state.visited
        pairs = self.state.pairs[child]
        i = self.child_index[child][v]
        for u in self.partners[v]:
            if u in visited:
                continue
            pairs.append((i, self.child_index[child][u]))
            if self._feasible(child):
                visited.add(u)
                segment.append(u)
                self._extend(u, root, segment, by_clique=True)
                segment.pop()
                visited.discard(u)
            pairs.pop()

        if self._mark_alone(child, v):
            self._cut_moves(v, root, segment)
            self._unmark_alone(child, v)

    def _cut_moves(self, v: int, root: int, segment: List[int]) -> None:
        state = self.state
        for u, w in self.adjacency[v]:
            if u in state.visited:
                continue
            state.visited.add(u)
            segment.append(u)
            state.weight += w
            self._extend(u, root, segment, by_clique=False)
            state.weight -= w
            segment.pop()
            state.visited.discard(u)

    def _close(self, segment: List[int], root: int) -> None:
        self.state.segments.append(tuple(segment))
        self._record()
        self._open(root)
        self.state.segments.pop()

    # child bookkeeping

    def _feasible(self, child: int) -> bool:
        state = self.state
        return self.child_tables[child].query(state.child_matching(child), state.alone[child]) is not None

    def _mark_alone(self, child: int, v: int) -> bool:
        self.state.alone[child] |= 1 << self.child_index[child][v]
        if self._feasible(child):
            return True
        self._unmark_alone(child, v)
        return False

    def _unmark_alone(self, child: int, v: int) -> None:
        self.state.alone[child] &= ~(1 << self.child_index[child][v])

    # recording

    def _record(self) -> None:
        state = self.state
        oriented = []
        for segment in state.segments:
            a, b = self.index[segment[0]], self.index[segment[-1]]
            if a < b:
                oriented.append(((a, b), segment))
            else:
                oriented.append(((b, a), tuple(reversed(segment))))
        oriented.sort()
        matching: Matching = tuple(pair for pair, _ in oriented)
        segments = tuple(segment for _, segment in oriented)

        touched = 0
        for x in state.visited:
            if x in self.index:
                touched |= 1 << self.index[x]

        if self.leaf:
            self.table.offer(matching, touched, state.weight, Witness(segments))
            return

        variants: Dict[int, Tuple[int, Tuple[ChildChoice, ...]]] = {touched: (state.weight, ())}
        for child, pairs in state.pairs.items():
            if not pairs:
                continue
            child_matching = canonical_matching(pairs)
            bits = self.parent_bits[child]
            free = 0
            for i, x in enumerate(self.view.child_boundaries[child]):
                if bits[i] and x not in state.visited:
                    free |= 1 << i
            projection = self.child_tables[child].project(child_matching, state.alone[child], free)
            merged: Dict[int, Tuple[int, Tuple[ChildChoice, ...]]] = {}
            for mask, (value, choices) in variants.items():
                for shadow, (child_value, child_touched) in projection.items():
                    parent_mask = mask
                    for i, bit in enumerate(bits):
                        if shadow >> i & 1:
                            parent_mask |= bit
                    total = value + child_value
                    current = merged.get(parent_mask)
                    if current is None or total > current[0]:
                        merged[parent_mask] = (total, choices + ((child, child_matching, child_touched),))
            variants = merged

        for mask, (value, choices) in variants.items():
            self.table.offer(matching, mask, value, Witness(segments, choices))


def preprocess_block(
    view: BlockView,
    child_tables: Optional[Mapping[int, BlockTable]] = None,
    symmetry_pruning: bool = True,
    budget: Optional[SearchBudget] = None,
    entry_cap: Optional[int] = None,
) -> BlockTable:
    """Exact table of `view` given the finished tables of its children."""
    if not view.boundary:
        return BlockTable.trivial(view.block)

    # one or two frames per search path node
    needed = 4 * len(view.nodes) + 200
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)

    started = time.monotonic()
    budget = budget or SearchBudget()
    expansions_before = budget.expansions
    table = SegmentSearch(view, child_tables, symmetry_pruning, budget, entry_cap).run()
    BLOCKS_PREPROCESSED.labels(level=str(view.level)).inc()
    logger.debug(
        "Block preprocessed",
        block=view.block,
        level=view.level,
        boundary=len(view.boundary),
        nodes=len(view.nodes),
        entries=table.size,
        expansions=budget.expansions - expansions_before,
        seconds=round(time.monotonic() - started, 6),
    )
    return table
