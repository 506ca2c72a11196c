"""
METIS graph files, partition files and solution files
"""

from pathlib import Path as FsPath
from typing import Dict, List, Optional, Sequence, Tuple, Union

import structlog

from ..core.exceptions import (
    AsymmetricAdjacency,
    DuplicateEdge,
    IdOutOfRange,
    InputError,
    MalformedHeader,
    MalformedLine,
    NegativeWeight,
    SelfLoop,
    WeightOutOfRange,
)
from ..models.graph import MAX_WEIGHT, Graph
from ..models.solution import Solution, SolveStatus

logger = structlog.get_logger(__name__)

PathLike = Union[str, FsPath]


def _content_lines(text: bytes) -> List[str]:
    try:
        decoded = text.decode("ascii")
    except UnicodeDecodeError as e:
        raise MalformedHeader("METIS text must be ASCII") from e
    lines = decoded.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines if not line.startswith("%")]


def _parse_int(token: str, what: str) -> int:
    try:
        value = int(token)
    except ValueError as e:
        raise MalformedLine(f"{what} '{token}' is not an integer") from e
    return value


def parse_metis(text: bytes) -> Graph:
    """Parse METIS adjacency text into a Graph.

    Header is `n m [fmt [ncon]]`. The last fmt digit enables edge weights, the
    middle digit per-vertex weights (skipped, `ncon` of them per line). Unweighted
    files get weight 1 on every edge.
    """
    lines = _content_lines(text)
    if not lines:
        raise MalformedHeader("Missing header line")
    header = lines[0].split()
    if len(header) < 2 or len(header) > 4:
        raise MalformedHeader(f"Header must be 'n m [fmt [ncon]]', got '{lines[0]}'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as e:
        raise MalformedHeader(f"Non-integer header '{lines[0]}'") from e
    fmt = header[2] if len(header) >= 3 else "0"
    if n < 0 or m < 0 or len(fmt) > 3 or any(c not in "01" for c in fmt):
        raise MalformedHeader(f"Invalid header '{lines[0]}'")
    fmt = fmt.rjust(3, "0")
    if fmt[0] == "1":
        raise MalformedHeader("Vertex sizes (fmt 1xx) are not supported")
    edge_weighted = fmt[2] == "1"
    vertex_weights = int(header[3]) if len(header) == 4 else 1
    if fmt[1] == "0":
        vertex_weights = 0

    body = lines[1:]
    while len(body) > n and body[-1].strip() == "":
        body.pop()
    if len(body) != n:
        raise MalformedHeader(f"Expected {n} vertex lines, found {len(body)}")

    step = 2 if edge_weighted else 1
    adjacency: List[Dict[int, int]] = [dict() for _ in range(n)]
    for u, line in enumerate(body):
        tokens = line.split()[vertex_weights:]
        if len(tokens) % step:
            raise MalformedLine(f"Vertex {u + 1} has an unpaired neighbor/weight token")
        for i in range(0, len(tokens), step):
            v = _parse_int(tokens[i], "Neighbor id") - 1
            w = _parse_int(tokens[i + 1], "Edge weight") if edge_weighted else 1
            if not 0 <= v < n:
                raise IdOutOfRange(f"Vertex {u + 1} lists neighbor {v + 1} outside 1..{n}")
            if v == u:
                raise SelfLoop(f"Vertex {u + 1} lists itself")
            if w < 0:
                raise NegativeWeight(f"Edge ({u + 1}, {v + 1}) has weight {w}")
            if w > MAX_WEIGHT:
                raise WeightOutOfRange(f"Edge ({u + 1}, {v + 1}) has weight {w} above {MAX_WEIGHT}")
            if v in adjacency[u]:
                raise DuplicateEdge(f"Vertex {u + 1} lists neighbor {v + 1} twice")
            adjacency[u][v] = w

    edges: List[Tuple[int, int, int]] = []
    for u, nbrs in enumerate(adjacency):
        for v, w in nbrs.items():
            if adjacency[v].get(u) != w:
                raise AsymmetricAdjacency(
                    f"Edge ({u + 1}, {v + 1}) is not listed symmetrically with equal weight"
                )
            if u < v:
                edges.append((u, v, w))
    if len(edges) != m:
        raise MalformedHeader(f"Header declares {m} edges, body has {len(edges)}")
    return Graph.from_edges(n, edges)


def emit_metis(g: Graph) -> bytes:
    """Canonical METIS text: fmt 1, ascending neighbors, one trailing newline."""
    out = [f"{g.n} {g.m} 1"]
    for nbrs in g.adjacency:
        out.append(" ".join(f"{v + 1} {w}" for v, w in nbrs))
    return ("\n".join(out) + "\n").encode("ascii")


def read_graph(path: PathLike) -> Graph:
    graph = parse_metis(FsPath(path).read_bytes())
    logger.info("Graph loaded", path=str(path), n=graph.n, m=graph.m)
    return graph


def write_graph(path: PathLike, g: Graph) -> None:
    FsPath(path).write_bytes(emit_metis(g))


def format_solution(solution: Solution) -> str:
    """Three-line solution text: status, weight, 1-based vertex ids."""
    weight = "-" if solution.weight is None else str(solution.weight)
    path = format_ids(solution.path or [])
    return f"status {solution.status.value}\nweight {weight}\n{path}\n"


def parse_solution_text(text: str) -> Tuple[SolveStatus, Optional[int], List[int]]:
    """Inverse of `format_solution`; returns 0-based vertex ids."""
    lines = text.split("\n")
    if len(lines) < 2 or not lines[0].startswith("status ") or not lines[1].startswith("weight "):
        raise InputError("Solution text must start with 'status' and 'weight' lines")
    try:
        status = SolveStatus(lines[0][len("status "):].strip())
    except ValueError as e:
        raise InputError(f"Unknown status line '{lines[0]}'") from e
    weight_token = lines[1][len("weight "):].strip()
    weight = None if weight_token == "-" else _parse_int(weight_token, "Weight")
    ids = lines[2].split() if len(lines) > 2 else []
    return status, weight, [_parse_int(tok, "Vertex id") - 1 for tok in ids]


def format_ids(vertices: Sequence[int]) -> str:
    return " ".join(str(v + 1) for v in vertices)
