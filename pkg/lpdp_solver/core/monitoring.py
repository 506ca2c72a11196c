"""
Search and benchmark metrics
"""

from pathlib import Path
from typing import Union

import structlog
from prometheus_client import CollectorRegistry, Counter, Histogram, generate_latest

logger = structlog.get_logger(__name__)

REGISTRY = CollectorRegistry(auto_describe=True)

SEARCH_EXPANSIONS = Counter(
    "lpdp_search_expansions_total",
    "Search nodes expanded",
    ["solver"],
    registry=REGISTRY,
)
SOLVE_DURATION = Histogram(
    "lpdp_solve_duration_seconds",
    "Wall-clock solve duration",
    ["solver"],
    buckets=(0.001, 0.01, 0.1, 1.0, 10.0, 60.0, 600.0, 3600.0),
    registry=REGISTRY,
)
RUN_OUTCOMES = Counter(
    "lpdp_run_outcomes_total",
    "Finished runs by outcome",
    ["solver", "status"],
    registry=REGISTRY,
)
BLOCKS_PREPROCESSED = Counter(
    "lpdp_blocks_preprocessed_total",
    "Block tables computed",
    ["level"],
    registry=REGISTRY,
)


def write_metrics(path: Union[str, Path]) -> None:
    """Write the text exposition of all solver metrics"""
    Path(path).write_bytes(generate_latest(REGISTRY))
    logger.info("Metrics written", path=str(path))
