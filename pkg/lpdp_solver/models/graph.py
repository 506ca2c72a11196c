"""
Graph, instance and path verdict models
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.exceptions import (
    DuplicateEdge,
    IdOutOfRange,
    InvalidInstanceError,
    NegativeWeight,
    SelfLoop,
    WeightOutOfRange,
)

Neighbor = Tuple[int, int]
Path = Sequence[int]

MAX_WEIGHT = (1 << 63) - 1


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph with nonnegative integer edge weights.

    `adjacency[v]` lists `(neighbor, weight)` pairs in ascending neighbor order;
    ids are 0-based and contiguous.
    """

    adjacency: Tuple[Tuple[Neighbor, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int, int]]) -> "Graph":
        """Build a graph, rejecting self-loops, duplicates, bad ids and negative weights."""
        lists: List[Dict[int, int]] = [dict() for _ in range(n)]
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise IdOutOfRange(f"Edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"Self-loop at vertex {u}")
            if w < 0:
                raise NegativeWeight(f"Edge ({u}, {v}) has weight {w}")
            if w > MAX_WEIGHT:
                raise WeightOutOfRange(f"Edge ({u}, {v}) has weight {w} above {MAX_WEIGHT}")
            if v in lists[u]:
                raise DuplicateEdge(f"Duplicate edge ({u}, {v})")
            lists[u][v] = w
            lists[v][u] = w
        return cls(tuple(tuple(sorted(nbrs.items())) for nbrs in lists))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(tuple(() for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @cached_property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    @cached_property
    def _weights(self) -> Dict[Tuple[int, int], int]:
        return {(u, v): w for u, nbrs in enumerate(self.adjacency) for v, w in nbrs}

    @cached_property
    def total_weight(self) -> int:
        return sum(w for (u, v), w in self._weights.items() if u < v)

    def neighbors(self, v: int) -> Tuple[Neighbor, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def weight(self, u: int, v: int) -> Optional[int]:
        """Weight of edge {u, v}, or None when not adjacent."""
        return self._weights.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weights

    def edges(self) -> List[Tuple[int, int, int]]:
        """Each edge once as (u, v, w) with u < v, in ascending order."""
        return [(u, v, w) for u, nbrs in enumerate(self.adjacency) for v, w in nbrs if u < v]

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced by `vertices`; vertex `vertices[i]` becomes id i."""
        remap = {v: i for i, v in enumerate(vertices)}
        edges = [
            (remap[u], remap[v], w)
            for u in vertices
            for v, w in self.adjacency[u]
            if v in remap and remap[u] < remap[v]
        ]
        return Graph.from_edges(len(vertices), edges)

    def relabel(self, permutation: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed to permutation[v]."""
        return Graph.from_edges(
            self.n, ((permutation[u], permutation[v], w) for u, v, w in self.edges())
        )


@dataclass(frozen=True)
class Instance:
    """A longest s-t path query."""

    graph: Graph
    source: int
    target: int
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        n = self.graph.n
        if not (0 <= self.source < n and 0 <= self.target < n):
            raise InvalidInstanceError(
                "Source or target outside the graph",
                details={"source": self.source, "target": self.target, "n": n},
            )
        if self.source == self.target:
            raise InvalidInstanceError("Source and target must differ", details={"vertex": self.source})

    def reversed(self) -> "Instance":
        return Instance(self.graph, self.target, self.source, self.name)


class FailureReason(str, Enum):
    """Why a path failed validation."""
    NON_EDGE = "NonEdge"
    REPEATED_VERTEX = "RepeatedVertex"
    WRONG_ENDPOINTS = "WrongEndpoints"
    EMPTY = "Empty"


@dataclass(frozen=True)
class Verdict:
    valid: bool
    weight: int = 0
    failure_reason: Optional[FailureReason] = None

    def __post_init__(self) -> None:
        if self.valid != (self.failure_reason is None):
            raise ValueError("valid must hold exactly when failure_reason is None")
