"""
Hierarchical combination, path reconstruction and the LPDP solve entry point
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import structlog

from ...models.graph import Graph, Instance
from ...models.solution import Solution, SolverConfig, SolveStatus
from ..budget import SearchBudget
from ..config import Settings, get_settings
from ..exceptions import SearchTimeout, WitnessMissingError
from ..partitioner import (
    Hierarchy,
    Partition,
    default_k,
    hierarchy_from_partition,
    load_partition,
    partition_hier,
)
from .preprocess import preprocess_block
from .table import BlockTable, Witness
from .views import BlockView, build_views, terminal_nodes

logger = structlog.get_logger(__name__)

ROOT_MATCHING = ((0, 1),)


@dataclass
class RootAnswer:
    """Root query result plus every table needed to reconstruct it."""

    root: int
    weight: Optional[int]
    touched: int
    tables: Dict[int, BlockTable]

    @property
    def feasible(self) -> bool:
        return self.weight is not None


def _preprocess_task(
    view: BlockView,
    child_tables: Dict[int, BlockTable],
    symmetry_pruning: bool,
    deadline: Optional[float],
    check_interval: int,
    entry_cap: Optional[int],
) -> Tuple[int, BlockTable, int]:
    budget = SearchBudget(deadline=deadline, check_interval=check_interval)
    table = preprocess_block(view, child_tables, symmetry_pruning, budget, entry_cap)
    return view.block, table, budget.expansions


def _run_level(
    block_ids: Sequence[int],
    views: Mapping[int, BlockView],
    tables: Dict[int, BlockTable],
    budget: SearchBudget,
    symmetry_pruning: bool,
    entry_cap: Optional[int],
    executor: Optional[ProcessPoolExecutor],
) -> None:
    """Preprocess one hierarchy level; children are finished before it starts."""
    if executor is None or len(block_ids) < 2:
        for b in block_ids:
            view = views[b]
            child_tables = {c: tables[c] for c in view.children}
            tables[b] = preprocess_block(view, child_tables, symmetry_pruning, budget, entry_cap)
        return

    futures = [
        executor.submit(
            _preprocess_task,
            views[b],
            {c: tables[c] for c in views[b].children},
            symmetry_pruning,
            budget.deadline,
            budget.check_interval,
            entry_cap,
        )
        for b in block_ids
    ]
    for future in futures:
        block, table, expansions = future.result()
        tables[block] = table
        budget.expansions += expansions
    budget.check()


def preprocess_leaves(
    views: Mapping[int, BlockView],
    hierarchy: Hierarchy,
    budget: Optional[SearchBudget] = None,
    symmetry_pruning: bool = True,
    entry_cap: Optional[int] = None,
    executor: Optional[ProcessPoolExecutor] = None,
) -> Dict[int, BlockTable]:
    budget = budget or SearchBudget()
    tables: Dict[int, BlockTable] = {}
    leaves = [node.id for node in hierarchy.leaves]
    _run_level(leaves, views, tables, budget, symmetry_pruning, entry_cap, executor)
    return tables


def combine_root(
    views: Mapping[int, BlockView],
    hierarchy: Hierarchy,
    leaf_tables: Mapping[int, BlockTable],
    budget: Optional[SearchBudget] = None,
    symmetry_pruning: bool = True,
    entry_cap: Optional[int] = None,
    executor: Optional[ProcessPoolExecutor] = None,
) -> RootAnswer:
    """Preprocess coarse levels bottom-up and query the root for the terminal pair."""
    budget = budget or SearchBudget()
    tables: Dict[int, BlockTable] = dict(leaf_tables)
    for level, block_ids in enumerate(hierarchy.by_level()):
        pending = [b for b in block_ids if b not in tables]
        if pending:
            _run_level(pending, views, tables, budget, symmetry_pruning, entry_cap, executor)
            logger.debug("Hierarchy level combined", level=level, blocks=len(pending))

    best = tables[hierarchy.root].best_entry(ROOT_MATCHING, 0)
    if best is None:
        return RootAnswer(hierarchy.root, None, 0, tables)
    weight, touched = best
    return RootAnswer(hierarchy.root, weight, touched, tables)


def _child_segment(
    child: int,
    choice_matching,
    choice_touched: int,
    a: int,
    b: int,
    views: Mapping[int, BlockView],
    tables: Mapping[int, BlockTable],
) -> List[int]:
    table = tables[child]
    if not table.has_entry(choice_matching, choice_touched):
        raise WitnessMissingError(
            "No stored entry for a child choice",
            details={"block": child, "matching": choice_matching, "touched": choice_touched},
        )
    index = views[child].boundary_index()
    pair = (min(index[a], index[b]), max(index[a], index[b]))
    try:
        position = choice_matching.index(pair)
    except ValueError as e:
        raise WitnessMissingError(
            "Child matching lacks a clique edge of the parent witness",
            details={"block": child, "pair": pair},
        ) from e
    witness = table.witness(choice_matching, choice_touched)
    segment = witness.segments[position]
    if segment[0] != a:
        segment = tuple(reversed(segment))
    return _expand_segment(child, segment, witness, views, tables)


def _expand_segment(
    block: int,
    segment: Sequence[int],
    witness: Witness,
    views: Mapping[int, BlockView],
    tables: Mapping[int, BlockTable],
) -> List[int]:
    view = views[block]
    expanded = [segment[0]]
    for a, b in zip(segment, segment[1:]):
        if view.is_leaf or view.owner[a] != view.owner[b]:
            expanded.append(b)
            continue
        child = view.owner[a]
        choice = witness.choice_for(child)
        if choice is None:
            raise WitnessMissingError(
                "Witness has no entry for a child it passes through",
                details={"block": block, "child": child},
            )
        _, child_matching, child_touched = choice
        expanded.extend(_child_segment(child, child_matching, child_touched, a, b, views, tables)[1:])
    return expanded


def reconstruct(answer: RootAnswer, views: Mapping[int, BlockView]) -> List[int]:
    """Expand the root witness down the hierarchy into an s-t path of original vertices."""
    if not answer.feasible:
        raise WitnessMissingError("Nothing to reconstruct for an infeasible root")
    root_view = views[answer.root]
    table = answer.tables[answer.root]
    if not table.has_entry(ROOT_MATCHING, answer.touched):
        raise WitnessMissingError("Root entry missing", details={"touched": answer.touched})
    witness = table.witness(ROOT_MATCHING, answer.touched)
    full = _expand_segment(answer.root, witness.segments[0], witness, views, answer.tables)

    terminal_s, terminal_t = terminal_nodes(root_view.n)
    if full[0] != terminal_s or full[-1] != terminal_t or len(full) < 4:
        raise WitnessMissingError("Reconstructed path does not run between the terminals")
    return full[1:-1]


def build_partition(
    g: Graph,
    config: SolverConfig,
    settings: Optional[Settings] = None,
    budget: Optional[SearchBudget] = None,
) -> Tuple[Partition, Hierarchy]:
    """Partition and hierarchy for a solve, from a file or the partitioner."""
    settings = settings or get_settings()
    if config.partition_file:
        text = Path(config.partition_file).read_bytes()
        partition = load_partition(text, g, config.imbalance, config.allow_imbalance)
        hierarchy = Hierarchy.flat(partition) if config.flat_hierarchy else hierarchy_from_partition(g, partition)
        return partition, hierarchy

    k = config.k or default_k(g.n, settings.LEAF_TARGET_SIZE)
    partition, hierarchy = partition_hier(
        g,
        k,
        config.imbalance,
        seed=config.seed,
        preset=config.preset,
        boundary_cap=config.boundary_cap,
        budget=budget,
    )
    if config.flat_hierarchy:
        hierarchy = Hierarchy.flat(partition)
    return partition, hierarchy


def solve_lpdp(
    instance: Instance,
    config: Optional[SolverConfig] = None,
    time_limit: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> Solution:
    """Exact longest s-t path by partitioning, block preprocessing and combination.

    Partitioning time counts towards `elapsed` and the time limit; the deadline
    is also checked between bisections.
    """
    settings = settings or get_settings()
    config = config or SolverConfig()
    g = instance.graph
    started = time.monotonic()
    budget = SearchBudget.from_limit(time_limit, settings.DEADLINE_CHECK_INTERVAL)
    timings: Dict[str, float] = {}
    executor = ProcessPoolExecutor(max_workers=config.jobs) if config.jobs > 1 else None

    def elapsed() -> float:
        return time.monotonic() - started

    try:
        partition, hierarchy = build_partition(g, config, settings, budget)
        timings["partition"] = elapsed()
        budget.check()

        views = build_views(g, hierarchy, instance.source, instance.target, config.boundary_cap)
        leaf_tables = preprocess_leaves(
            views, hierarchy, budget, config.symmetry_pruning, settings.TABLE_ENTRY_CAP, executor
        )
        timings["preprocess"] = elapsed() - timings["partition"]

        answer = combine_root(
            views, hierarchy, leaf_tables, budget, config.symmetry_pruning, settings.TABLE_ENTRY_CAP, executor
        )
        timings["combine"] = elapsed() - timings["partition"] - timings["preprocess"]
    except SearchTimeout:
        logger.info("LPDP solve timed out", instance=instance.name, expansions=budget.expansions)
        return Solution(status=SolveStatus.TIMEOUT, elapsed=elapsed(), expanded=budget.expansions, timings=timings)
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)

    if not answer.feasible:
        return Solution(status=SolveStatus.NO_PATH, elapsed=elapsed(), expanded=budget.expansions, timings=timings)

    path = reconstruct(answer, views)
    logger.info(
        "LPDP solve finished",
        instance=instance.name,
        k=partition.k,
        levels=hierarchy.height,
        weight=answer.weight,
        expansions=budget.expansions,
    )
    return Solution(
        status=SolveStatus.SOLVED,
        weight=answer.weight,
        path=path,
        elapsed=elapsed(),
        expanded=budget.expansions,
        timings=timings,
    )
