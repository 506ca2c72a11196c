"""
LPDP Solver - exact longest simple paths by partitioning and dynamic programming

The graph is partitioned into small blocks arranged in a hierarchy. Each block
is searched once for the best ways to connect its boundary vertices by
vertex-disjoint paths; the resulting tables are combined level by level until
the whole graph is one block and the longest s-t path can be read off and
reconstructed.

Main Components:
- Graph / Instance: immutable weighted graphs and s-t queries, METIS I/O
- partition_hier: multilevel recursive bisection plus block hierarchy
- solve_lpdp: the partition-based exact solver
- exhaustive_dfs: brute-force reference solver
- BenchmarkService: time-limited suites, CSV results, cactus/scatter/speedup reports

Example Usage:
    ```python
    from lpdp_solver import SolverConfig, SolverService, generate_maze, maze_to_instance

    instance = maze_to_instance(generate_maze(7, 0.3, seed=1))
    solution = SolverService().solve(instance, SolverConfig(k=2))
    print(solution.status, solution.weight)
    ```
"""

from .core.exceptions import (
    InputError,
    LPDPError,
    MetisFormatError,
    NoCommonInstancesError,
    SearchTimeout,
)
from .core.exhaustive import brute_force_block_table, exhaustive_dfs
from .core.lpdp import BlockTable, BlockView, build_leaf_views, combine_root, preprocess_block, reconstruct, solve_lpdp
from .core.partitioner import Hierarchy, Partition, cut_weight, load_partition, partition_hier
from .core.paths import path_weight, validate_path
from .models.bench import RunRecord, SuiteSpec
from .models.graph import Graph, Instance, Verdict
from .models.solution import Solution, SolverConfig, SolveStatus
from .services.benchmark_service import BenchmarkService, run_suite
from .services.instance_generator import (
    anypair_reduction,
    extract_bfs_subgraph,
    generate_maze,
    generate_random_graph,
    maze_to_instance,
)
from .services.metis_io import emit_metis, parse_metis
from .services.report_service import cactus_data, emit_plots, scatter_data, speedup_report
from .services.solver_service import SolverService

__version__ = "1.0.0"
__description__ = "Exact longest simple path solver using partitioning and dynamic programming"

__all__ = [
    # Graph core
    "Graph",
    "Instance",
    "Verdict",
    "parse_metis",
    "emit_metis",
    "path_weight",
    "validate_path",
    # Instances
    "generate_maze",
    "maze_to_instance",
    "extract_bfs_subgraph",
    "anypair_reduction",
    "generate_random_graph",
    # Partitioning
    "Partition",
    "Hierarchy",
    "partition_hier",
    "cut_weight",
    "load_partition",
    # Solvers
    "Solution",
    "SolveStatus",
    "SolverConfig",
    "SolverService",
    "exhaustive_dfs",
    "brute_force_block_table",
    "BlockTable",
    "BlockView",
    "build_leaf_views",
    "preprocess_block",
    "combine_root",
    "reconstruct",
    "solve_lpdp",
    # Benchmarks
    "RunRecord",
    "SuiteSpec",
    "BenchmarkService",
    "run_suite",
    "cactus_data",
    "speedup_report",
    "scatter_data",
    "emit_plots",
    # Exceptions
    "LPDPError",
    "InputError",
    "MetisFormatError",
    "NoCommonInstancesError",
    "SearchTimeout",
]
