"""
Path weight and validation
"""

from ..models.graph import FailureReason, Graph, Path, Verdict
from .exceptions import NonEdgeError


def path_weight(g: Graph, p: Path) -> int:
    """Sum of edge weights along `p`; a single vertex weighs 0."""
    total = 0
    for u, v in zip(p, p[1:]):
        w = g.weight(u, v)
        if w is None:
            raise NonEdgeError(f"Vertices {u} and {v} are not adjacent", details={"u": u, "v": v})
        total += w
    return total


def validate_path(g: Graph, p: Path, s: int, t: int) -> Verdict:
    """Check that `p` is a simple s-t path in `g`; report its weight if so."""
    if len(p) == 0:
        return Verdict(False, 0, FailureReason.EMPTY)
    if any(not (0 <= v < g.n) for v in p):
        return Verdict(False, 0, FailureReason.NON_EDGE)
    if len(set(p)) != len(p):
        return Verdict(False, 0, FailureReason.REPEATED_VERTEX)
    if p[0] != s or p[-1] != t:
        return Verdict(False, 0, FailureReason.WRONG_ENDPOINTS)
    try:
        weight = path_weight(g, p)
    except NonEdgeError:
        return Verdict(False, 0, FailureReason.NON_EDGE)
    return Verdict(True, weight, None)
