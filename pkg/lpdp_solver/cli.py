"""
Command-line interface: generators, partitioning, solving, verification and benchmarks

Exit codes: 0 success, 1 failure, 2 NoPath, 3 Timeout, 4 usage or input error.
"""

import sys
from pathlib import Path
from typing import List, Optional

import click
import structlog

from .core.config import get_settings
from .core.exceptions import (
    EXIT_FAILURE,
    EXIT_NO_PATH,
    EXIT_OK,
    EXIT_TIMEOUT,
    EXIT_USAGE,
    LPDPError,
    exit_code_for,
)
from .core.logging import setup_logging
from .core.monitoring import write_metrics
from .core.paths import validate_path
from .core.partitioner import cut_weight, default_k, emit_partition, partition_hier
from .models.bench import SuiteSpec
from .models.graph import Instance
from .models.solution import SolverConfig, SolveStatus
from .services import instance_generator as gen
from .services.benchmark_service import BenchmarkService, read_records
from .services.metis_io import format_solution, parse_solution_text, read_graph, write_graph
from .services.report_service import (
    cactus_data,
    emit_plots,
    scatter_data,
    solved_counts,
    speedup_report,
)
from .services.solver_service import SOLVERS, SolverService

logger = structlog.get_logger(__name__)

STATUS_EXIT = {
    SolveStatus.SOLVED: EXIT_OK,
    SolveStatus.NO_PATH: EXIT_NO_PATH,
    SolveStatus.TIMEOUT: EXIT_TIMEOUT,
}


def _seed(seed: Optional[int]) -> int:
    """Explicit seed, else LPDP_SEED."""
    return get_settings().SEED if seed is None else seed


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _instance_summary(instance: Instance) -> str:
    return f"source {instance.source + 1}\ntarget {instance.target + 1}\nn {instance.graph.n}\nm {instance.graph.m}\n"


@click.group()
@click.option("--log-level", default=None, help="Override LPDP_LOG_LEVEL")
@click.version_option(get_settings().PROJECT_VERSION, prog_name="lpdp")
def cli(log_level: Optional[str]) -> None:
    """Exact longest simple paths by partitioning and dynamic programming."""
    settings = get_settings()
    if log_level:
        settings = settings.model_copy(update={"LOG_LEVEL": log_level})
    setup_logging(settings)


# generate


@cli.group()
def generate() -> None:
    """Write benchmark instances as METIS graphs."""


@generate.command("maze")
@click.option("--n", "side", type=int, required=True, help="Grid side length")
@click.option("--fill", type=float, required=True, help="Obstacle fraction in [0, 1)")
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="METIS output file")
@click.option("--maze-out", type=click.Path(dir_okay=False), default=None, help="Also write the maze text")
def generate_maze(side: int, fill: float, seed: Optional[int], out: str, maze_out: Optional[str]) -> int:
    """Grid maze; source is the top-left cell, target the bottom-right one."""
    maze = gen.generate_maze(side, fill, _seed(seed))
    instance = gen.maze_to_instance(maze)
    write_graph(out, instance.graph)
    if maze_out:
        Path(maze_out).write_text(maze.to_text(), encoding="utf-8")
    click.echo(_instance_summary(instance), nl=False)
    return EXIT_OK


@generate.command("subgraph")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--size", type=int, required=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def generate_subgraph(graph_path: str, size: int, seed: Optional[int], out: str) -> int:
    """BFS-grown induced subgraph of a host graph."""
    instance = gen.extract_bfs_subgraph(read_graph(graph_path), size, _seed(seed))
    write_graph(out, instance.graph)
    click.echo(_instance_summary(instance), nl=False)
    return EXIT_OK


@generate.command("random")
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True, help="Edge probability")
@click.option("--max-weight", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def generate_random(n: int, p: float, max_weight: int, seed: Optional[int], out: str) -> int:
    """Seeded G(n, p) graph with random integer weights."""
    instance = gen.random_instance(n, p, max_weight, _seed(seed))
    write_graph(out, instance.graph)
    click.echo(_instance_summary(instance), nl=False)
    return EXIT_OK


# partition / solve / verify


@cli.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--k", type=int, default=None, help="Blocks (power of two)")
@click.option("--imbalance", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--preset", type=click.Choice(["eco", "strong"]), default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def partition(
    graph_path: str,
    k: Optional[int],
    imbalance: Optional[float],
    seed: Optional[int],
    preset: Optional[str],
    out: str,
) -> int:
    """Balanced k-way partition written as one block id per line."""
    settings = get_settings()
    g = read_graph(graph_path)
    k = k or default_k(g.n, settings.LEAF_TARGET_SIZE)
    epsilon = settings.DEFAULT_IMBALANCE if imbalance is None else imbalance
    p, _ = partition_hier(g, k, epsilon, _seed(seed), preset or settings.PARTITION_PRESET)
    Path(out).write_bytes(emit_partition(p))
    click.echo(f"k {p.k}\ncut {cut_weight(g, p)}\nmax_block {max(p.block_sizes())}\nl_max {p.l_max}\n", nl=False)
    return EXIT_OK


@cli.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--source", type=int, default=None, help="1-based source vertex")
@click.option("--target", type=int, default=None, help="1-based target vertex")
@click.option("--solver", type=click.Choice(SOLVERS), default="lpdp", show_default=True)
@click.option("--k", type=int, default=None)
@click.option("--imbalance", type=float, default=None)
@click.option("--boundary-cap", type=int, default=None)
@click.option("--partition-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--allow-imbalance", is_flag=True, help="Accept partition files over L_max")
@click.option("--seed", type=int, default=None)
@click.option("--time-limit", type=float, default=None, help="Seconds")
@click.option("--preset", type=click.Choice(["eco", "strong"]), default=None)
@click.option("--flat", is_flag=True, help="Combine all leaf blocks in one level")
@click.option("--no-pruning", is_flag=True, help="Disable segment id-ordering pruning")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--any-pair", is_flag=True, help="Longest path between any two vertices")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def solve(
    graph_path: str,
    source: Optional[int],
    target: Optional[int],
    solver: str,
    k: Optional[int],
    imbalance: Optional[float],
    boundary_cap: Optional[int],
    partition_file: Optional[str],
    allow_imbalance: bool,
    seed: Optional[int],
    time_limit: Optional[float],
    preset: Optional[str],
    flat: bool,
    no_pruning: bool,
    jobs: int,
    any_pair: bool,
    out: Optional[str],
) -> int:
    """Longest simple path; prints status, weight and 1-based vertex ids."""
    if any_pair and partition_file:
        # the any-pair graph has two more vertices than the partition file
        raise click.UsageError("--any-pair cannot be combined with --partition-file")
    settings = get_settings()
    g = read_graph(graph_path)
    config = SolverConfig(
        solver=solver,
        k=k,
        imbalance=settings.DEFAULT_IMBALANCE if imbalance is None else imbalance,
        boundary_cap=boundary_cap or settings.BOUNDARY_CAP,
        partition_file=partition_file,
        allow_imbalance=allow_imbalance,
        seed=_seed(seed),
        preset=preset or settings.PARTITION_PRESET,
        symmetry_pruning=not no_pruning,
        flat_hierarchy=flat,
        jobs=jobs,
        any_pair=any_pair,
    )
    service = SolverService(settings)
    if any_pair:
        solution = service.solve_any_pair(g, config, time_limit, name=Path(graph_path).stem)
    else:
        if source is None or target is None:
            raise click.UsageError("--source and --target are required unless --any-pair is given")
        instance = Instance(g, source - 1, target - 1, name=Path(graph_path).stem)
        solution = service.solve(instance, config, time_limit)
    _emit(format_solution(solution), out)
    return STATUS_EXIT[solution.status]


@cli.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--source", type=int, required=True)
@click.option("--target", type=int, required=True)
@click.option("--solution", "solution_path", required=True, type=click.Path(exists=True, dir_okay=False))
def verify(graph_path: str, source: int, target: int, solution_path: str) -> int:
    """Re-validate a solution file against its graph."""
    g = read_graph(graph_path)
    status, weight, path = parse_solution_text(Path(solution_path).read_text(encoding="utf-8"))
    if status is not SolveStatus.SOLVED:
        click.echo(f"status {status.value}")
        return STATUS_EXIT[status]
    instance = Instance(g, source - 1, target - 1)
    verdict = validate_path(instance.graph, path, instance.source, instance.target)
    if not verdict.valid:
        click.echo(f"invalid {verdict.failure_reason.value}")
        return EXIT_FAILURE
    if verdict.weight != weight:
        click.echo(f"invalid WeightMismatch {verdict.weight} != {weight}")
        return EXIT_FAILURE
    click.echo(f"valid weight {verdict.weight}")
    return EXIT_OK


# bench


@cli.group()
def bench() -> None:
    """Run suites and build reports from result CSVs."""


@bench.command("run")
@click.option("--suite", "suite_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Suite JSON")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Results CSV (overrides the suite)")
@click.option("--time-limit", type=float, default=None, help="Seconds (overrides the suite)")
@click.option("--repetitions", type=int, default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Parallel runs (overrides the suite)")
@click.option("--in-process", is_flag=True, help="Run solvers without process isolation")
@click.option("--metrics-out", default=None, type=click.Path(dir_okay=False))
def bench_run(
    suite_path: str,
    out: Optional[str],
    time_limit: Optional[float],
    repetitions: Optional[int],
    jobs: Optional[int],
    in_process: bool,
    metrics_out: Optional[str],
) -> int:
    """Run every (instance, solver, repetition) of a suite."""
    spec = SuiteSpec.model_validate_json(Path(suite_path).read_text(encoding="utf-8"))
    overrides = {
        key: value
        for key, value in {"output": out, "time_limit": time_limit, "repetitions": repetitions, "jobs": jobs}.items()
        if value is not None
    }
    if in_process:
        overrides["in_process"] = True
    spec = spec.model_copy(update=overrides)
    records = BenchmarkService().run_suite(spec)
    for record in records:
        weight = "-" if record.weight is None else record.weight
        click.echo(f"{record.instance} {record.solver} {record.status.value} {record.seconds:.6f} {weight}")
    if metrics_out:
        write_metrics(metrics_out)
    return EXIT_OK


@bench.command("cactus")
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--solver", required=True)
def bench_cactus(results: str, solver: str) -> int:
    """Print `rank seconds` for the solver's solved instances."""
    for rank, seconds in cactus_data(read_records(results), solver):
        click.echo(f"{rank} {seconds:.6f}")
    return EXIT_OK


@bench.command("scatter")
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--a", "solver_a", required=True)
@click.option("--b", "solver_b", required=True)
@click.option("--time-limit", type=float, required=True)
def bench_scatter(results: str, solver_a: str, solver_b: str, time_limit: float) -> int:
    """Print per-instance seconds of two solvers; unfinished runs are clamped to the limit."""
    for p in scatter_data(read_records(results), solver_a, solver_b, time_limit):
        rail = ",".join(name for name, flag in (("a", p.a_rail), ("b", p.b_rail)) if flag) or "-"
        click.echo(f"{p.instance} {p.a_seconds:.6f} {p.b_seconds:.6f} {rail}")
    return EXIT_OK


@bench.command("speedup")
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--baseline", required=True)
@click.option("--subject", required=True)
def bench_speedup(results: str, baseline: str, subject: str) -> int:
    """Baseline/subject time ratios on commonly solved instances."""
    report = speedup_report(read_records(results), baseline, subject)
    for instance, ratio in report.ratios.items():
        click.echo(f"{instance} {ratio:.4f}")
    click.echo(f"mean {report.mean:.4f}")
    click.echo(f"geometric_mean {report.geometric_mean:.4f}")
    return EXIT_OK


@bench.command("plot")
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--time-limit", type=float, required=True)
@click.option("--a", "solver_a", default=None)
@click.option("--b", "solver_b", default=None)
def bench_plot(results: str, out_dir: str, time_limit: float, solver_a: Optional[str], solver_b: Optional[str]) -> int:
    """Write cactus.svg and, for two solvers, scatter.svg."""
    pair = (solver_a, solver_b) if solver_a and solver_b else None
    for path in emit_plots(read_records(results), out_dir, time_limit, pair):
        click.echo(str(path))
    return EXIT_OK


@bench.command("table")
@click.option("--results", required=True, type=click.Path(exists=True, dir_okay=False))
def bench_table(results: str) -> int:
    """Solved instances per family and solver."""
    table = solved_counts(read_records(results))
    click.echo(table.to_string() if not table.empty else "no records")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map outcomes onto exit codes."""
    try:
        result = cli.main(args=argv, prog_name="lpdp", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_FAILURE
    except LPDPError as e:
        logger.error("Command failed", error=str(e), code=e.code)
        click.echo(f"error: {e}", err=True)
        return exit_code_for(e)
    except (OSError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
