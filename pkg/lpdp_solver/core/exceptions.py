"""
Custom exceptions for the LPDP solver
"""

from typing import Optional, Dict, Any


class LPDPError(Exception):
    """Base exception for all solver, generator and harness errors."""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.code = code or type(self).__name__
        self.details = details or {}

    def __str__(self) -> str:
        error_parts = [self.message]
        if self.code:
            error_parts.append(f"Code: {self.code}")
        if self.details:
            rendered = ", ".join(f"{k}={v}" for k, v in sorted(self.details.items()))
            error_parts.append(rendered)
        return " | ".join(error_parts)


class InputError(LPDPError):
    """Raised when user-supplied data or parameters are unusable."""


# METIS parsing


class MetisFormatError(InputError):
    """Raised when a METIS graph file cannot be parsed."""


class MalformedHeader(MetisFormatError):
    """Header line missing, unparsable or inconsistent with the body."""


class MalformedLine(MetisFormatError):
    """A vertex line holds a token that is not a nonnegative integer."""


class AsymmetricAdjacency(MetisFormatError):
    """u lists v but v does not list u with the same weight."""


class SelfLoop(MetisFormatError):
    """A vertex lists itself as a neighbor."""


class DuplicateEdge(MetisFormatError):
    """A vertex lists the same neighbor twice."""


class IdOutOfRange(MetisFormatError):
    """A neighbor id lies outside 1..n."""


class NegativeWeight(MetisFormatError):
    """An edge weight is negative."""


class WeightOutOfRange(MetisFormatError):
    """An edge weight does not fit in a signed 64-bit integer."""


# Graph-core


class NonEdgeError(InputError):
    """Two consecutive path vertices are not adjacent."""


class InvalidInstanceError(InputError):
    """Source/target ids are invalid or equal."""


class InvalidParameterError(InputError, ValueError):
    """A generator or solver parameter violates its precondition."""


# Instance generation


class UnsatisfiableMazeError(LPDPError):
    """No connected maze was found within the retry budget."""


class ComponentTooSmallError(LPDPError):
    """No BFS root had a component large enough within the retry budget."""


# Partitioning


class InfeasibleBalanceError(InputError):
    """The requested number of blocks cannot be balanced (k > n)."""


class LineCountMismatchError(InputError):
    """A partition file does not hold exactly one line per vertex."""


class NonContiguousBlockIdsError(InputError):
    """Block ids in a partition file are not exactly 0..k-1."""


class BalanceViolatedError(InputError):
    """A loaded partition exceeds L_max for the given imbalance."""


class BoundaryTooLargeError(LPDPError):
    """A block has more boundary vertices than the configured cap."""


# Solvers


class TooLargeError(InputError):
    """A brute-force oracle was asked to handle a view beyond its limits."""


class TableBlowupError(LPDPError):
    """A block table exceeded the configured entry cap."""


class WitnessMissingError(LPDPError):
    """Reconstruction found no stored witness for a table entry."""


class SearchTimeout(LPDPError):
    """Cooperative deadline reached inside a search; never leaves a solver."""

    def __init__(self, message: str = "Search deadline reached", **kwargs):
        super().__init__(message, **kwargs)


# Benchmark reports


class NoCommonInstancesError(LPDPError):
    """Two solvers share no commonly solved instance."""


class EmptySeriesError(LPDPError):
    """A plot was requested for an empty series."""


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NO_PATH = 2
EXIT_TIMEOUT = 3
EXIT_USAGE = 4


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the CLI exit code contract."""

    if isinstance(exc, InputError):
        return EXIT_USAGE
    return EXIT_FAILURE
