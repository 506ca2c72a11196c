"""
Block views: what each hierarchy node's search sees

Node ids inside views are original vertex ids, plus two terminal nodes: `n`
attached to the source and `n + 1` attached to the target by weight-0 edges.
A boundary node stands for the single entry/exit point of its vertex, so a
boundary vertex and its attachment share one id.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import structlog

from ...models.graph import Graph
from ..exceptions import BoundaryTooLargeError
from ..partitioner import Hierarchy, Partition

logger = structlog.get_logger(__name__)

Edge = Tuple[int, int, int]


def terminal_nodes(n: int) -> Tuple[int, int]:
    """(terminal_s, terminal_t) node ids for a graph with n vertices."""
    return n, n + 1


@dataclass(frozen=True)
class BoundaryVertex:
    vertex: int
    block: int
    index: int
    terminal: bool = False


@dataclass(frozen=True)
class BlockView:
    """Nodes, edges and boundary of one hierarchy node.

    Leaf views hold the block's vertices, its internal edges and the terminal
    attachments. Coarse views hold the union of their children's boundaries
    and the cut edges between children with original weights; edges inside a
    child are implicit and resolved through the child's table.
    """

    block: int
    level: int
    n: int
    nodes: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    boundary: Tuple[int, ...]
    children: Tuple[int, ...] = ()
    owner: Dict[int, int] = field(default_factory=dict, compare=False)
    child_boundaries: Dict[int, Tuple[int, ...]] = field(default_factory=dict, compare=False)
    flat_nodes: Tuple[int, ...] = ()
    flat_edges: Tuple[Edge, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def boundary_index(self) -> Dict[int, int]:
        return {x: i for i, x in enumerate(self.boundary)}

    def boundary_vertices(self) -> List[BoundaryVertex]:
        return [BoundaryVertex(x, self.block, i, terminal=x >= self.n) for i, x in enumerate(self.boundary)]

    def adjacency(self) -> Dict[int, List[Tuple[int, int]]]:
        """Explicit edges as sorted neighbor lists."""
        adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in self.nodes}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def flat_adjacency(self) -> Dict[int, List[Tuple[int, int]]]:
        """Induced original subgraph plus terminal attachments."""
        adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in self.flat_nodes}
        for u, v, w in self.flat_edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        for nbrs in adj.values():
            nbrs.sort()
        return adj


def _block_boundary(g: Graph, vertices, s: int, t: int) -> Tuple[int, ...]:
    terminal_s, terminal_t = terminal_nodes(g.n)
    bd = [x for x in vertices if any(u not in vertices for u, _ in g.neighbors(x))]
    if s in vertices:
        bd.append(terminal_s)
    if t in vertices:
        bd.append(terminal_t)
    return tuple(sorted(bd))


def _flat_part(g: Graph, vertices, s: int, t: int) -> Tuple[Tuple[int, ...], Tuple[Edge, ...]]:
    terminal_s, terminal_t = terminal_nodes(g.n)
    nodes = sorted(vertices)
    edges = [(u, v, w) for u in nodes for v, w in g.neighbors(u) if u < v and v in vertices]
    if s in vertices:
        nodes.append(terminal_s)
        edges.append((s, terminal_s, 0))
    if t in vertices:
        nodes.append(terminal_t)
        edges.append((t, terminal_t, 0))
    return tuple(nodes), tuple(edges)


def build_views(
    g: Graph,
    hierarchy: Hierarchy,
    s: int,
    t: int,
    boundary_cap: Optional[int] = None,
) -> Dict[int, BlockView]:
    """One view per hierarchy node, keyed by node id."""
    terminal_s, terminal_t = terminal_nodes(g.n)
    views: Dict[int, BlockView] = {}
    for level in hierarchy.by_level():
        for node_id in level:
            node = hierarchy.node(node_id)
            vertices = node.vertices
            if node_id == hierarchy.root:
                boundary = (terminal_s, terminal_t)
            else:
                boundary = _block_boundary(g, vertices, s, t)
                if boundary_cap is not None and len(boundary) > boundary_cap:
                    raise BoundaryTooLargeError(
                        "Block boundary exceeds the cap; use a smaller k or an external partition",
                        details={"block": node_id, "boundary": len(boundary), "cap": boundary_cap},
                    )
            flat_nodes, flat_edges = _flat_part(g, vertices, s, t)

            if node.is_leaf:
                views[node_id] = BlockView(
                    block=node_id,
                    level=node.level,
                    n=g.n,
                    nodes=flat_nodes,
                    edges=flat_edges,
                    boundary=boundary,
                    flat_nodes=flat_nodes,
                    flat_edges=flat_edges,
                )
                continue

            owner: Dict[int, int] = {}
            child_boundaries: Dict[int, Tuple[int, ...]] = {}
            for c in node.children:
                child_boundaries[c] = views[c].boundary
                for x in views[c].boundary:
                    owner[x] = c
            cut_edges = tuple(
                (u, v, w)
                for u, v, w in flat_edges
                if u in owner and v in owner and owner[u] != owner[v]
            )
            views[node_id] = BlockView(
                block=node_id,
                level=node.level,
                n=g.n,
                nodes=tuple(sorted(owner)),
                edges=cut_edges,
                boundary=boundary,
                children=tuple(node.children),
                owner=owner,
                child_boundaries=child_boundaries,
                flat_nodes=flat_nodes,
                flat_edges=flat_edges,
            )

    logger.debug(
        "Block views built",
        views=len(views),
        max_boundary=max((len(v.boundary) for v in views.values()), default=0),
    )
    return views


def build_leaf_views(
    g: Graph,
    p: Partition,
    h: Hierarchy,
    s: int,
    t: int,
    boundary_cap: Optional[int] = None,
) -> List[BlockView]:
    """Leaf views in block id order."""
    views = build_views(g, h, s, t, boundary_cap)
    return [views[b] for b in range(p.k)]
