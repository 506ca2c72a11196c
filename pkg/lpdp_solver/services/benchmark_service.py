"""
Benchmark suite runner and CSV persistence
"""

import multiprocessing
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
import structlog

from ..core.config import Settings, get_settings
from ..core.logging import RunAuditLogger
from ..models.bench import CSV_COLUMNS, RunRecord, RunStatus, SolverEntry, SuiteSpec
from ..models.graph import Instance
from ..models.solution import Solution, SolverConfig, SolveStatus
from .solver_service import SolverService

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def _solve_in_child(conn, instance: Instance, config: SolverConfig, time_limit: float) -> None:
    try:
        solution = SolverService().solve(instance, config, time_limit)
        conn.send(("ok", solution.model_dump(mode="json")))
    except Exception as e:  # reported as an Error record
        conn.send(("error", f"{type(e).__name__}: {e}"))
    finally:
        conn.close()


class BenchmarkService:
    """Runs every (instance, solver, repetition) of a suite under a time limit."""

    def __init__(self, settings: Optional[Settings] = None, audit: Optional[RunAuditLogger] = None):
        self.settings = settings or get_settings()
        self.audit = audit or RunAuditLogger()
        self.solver_service = SolverService(self.settings)

    def _run_isolated(
        self,
        instance: Instance,
        config: SolverConfig,
        time_limit: float,
        start_method: Optional[str] = None,
    ) -> Dict[str, Any]:
        """Solve in a child process; kill it once the limit plus grace has passed."""
        ctx = multiprocessing.get_context(start_method)
        receiver, sender = ctx.Pipe(duplex=False)
        process = ctx.Process(target=_solve_in_child, args=(sender, instance, config, time_limit), daemon=True)
        started = time.monotonic()
        process.start()
        sender.close()
        wait = time_limit * (1 + self.settings.TIMEOUT_GRACE)
        try:
            if receiver.poll(wait):
                kind, payload = receiver.recv()
                process.join()
                return {"kind": kind, "payload": payload}
            return {"kind": "killed", "payload": time.monotonic() - started}
        except EOFError:
            return {"kind": "error", "payload": f"solver process exited with code {process.exitcode}"}
        finally:
            if process.is_alive():
                process.terminate()
                process.join()
            receiver.close()

    def _run_inline(self, instance: Instance, config: SolverConfig, time_limit: float) -> Dict[str, Any]:
        try:
            solution = self.solver_service.solve(instance, config, time_limit)
            return {"kind": "ok", "payload": solution.model_dump(mode="json")}
        except Exception as e:
            return {"kind": "error", "payload": f"{type(e).__name__}: {e}"}

    def run_one(
        self,
        instance: Instance,
        entry: SolverEntry,
        time_limit: float,
        in_process: bool = False,
        start_method: Optional[str] = None,
    ) -> RunRecord:
        """One run turned into a record; Solved paths are re-validated."""
        config = entry.config
        outcome = (
            self._run_inline(instance, config, time_limit)
            if in_process
            else self._run_isolated(instance, config, time_limit, start_method)
        )
        common = {
            "instance": instance.name,
            "solver": entry.name,
            "seed": config.seed,
            "config_hash": config.config_hash(),
        }
        cap = time_limit * (1 + self.settings.TIMEOUT_GRACE)

        if outcome["kind"] == "killed":
            return RunRecord(status=RunStatus.TIMEOUT, seconds=min(outcome["payload"], cap), **common)
        if outcome["kind"] == "error":
            logger.error("Solver run failed", instance=instance.name, solver=entry.name, error=outcome["payload"])
            return RunRecord(status=RunStatus.ERROR, seconds=0.0, **common)

        solution = Solution.model_validate(outcome["payload"])
        partition_seconds = solution.timings.get("partition") if config.solver == "lpdp" else None
        if solution.status is SolveStatus.TIMEOUT:
            return RunRecord(
                status=RunStatus.TIMEOUT,
                seconds=min(solution.elapsed, cap),
                partition_seconds=partition_seconds,
                **common,
            )
        if solution.status is SolveStatus.NO_PATH:
            return RunRecord(
                status=RunStatus.NO_PATH,
                seconds=solution.elapsed,
                partition_seconds=partition_seconds,
                **common,
            )

        verdict = SolverService.verify(instance, solution, any_pair=config.any_pair)
        if not verdict.valid or verdict.weight != solution.weight:
            reason = verdict.failure_reason.value if verdict.failure_reason else "WeightMismatch"
            self.audit.log_invalid_solution(instance.name, entry.name, reason)
            return RunRecord(status=RunStatus.ERROR, seconds=solution.elapsed, **common)
        return RunRecord(
            status=RunStatus.SOLVED,
            seconds=solution.elapsed,
            weight=solution.weight,
            partition_seconds=partition_seconds,
            **common,
        )

    def run_suite(self, spec: SuiteSpec) -> List[RunRecord]:
        """Records in (instance, solver, repetition) order; persisted when `spec.output` is set.

        With `spec.jobs > 1` runs are dispatched to a thread pool. Each run keeps
        its own child process and timer, so parallel runs do not share a limit.
        """
        instances = [instance_spec.build() for instance_spec in spec.instances]
        tasks: List[Tuple[Instance, SolverEntry, int]] = [
            (instance, entry, repetition)
            for instance in instances
            for entry in spec.solvers
            for repetition in range(spec.repetitions)
        ]
        # forking a process that runs threads can copy held locks into the child
        start_method = "spawn" if spec.jobs > 1 else None

        def run(task: Tuple[Instance, SolverEntry, int]) -> RunRecord:
            instance, entry, _ = task
            return self.run_one(instance, entry, spec.time_limit, spec.in_process, start_method)

        if spec.jobs > 1:
            logger.info("Dispatching suite runs", runs=len(tasks), jobs=spec.jobs)
            with ThreadPoolExecutor(max_workers=spec.jobs) as executor:
                records = list(executor.map(run, tasks))
        else:
            records = [run(task) for task in tasks]

        for (_, _, repetition), record in zip(tasks, records):
            self.audit.log_run_record(
                record.instance,
                record.solver,
                record.status.value,
                record.seconds,
                record.weight,
                {"repetition": repetition, "config_hash": record.config_hash},
            )

        for instance_id, weights in find_disagreements(records).items():
            self.audit.log_disagreement(instance_id, weights)
        if spec.output:
            write_records(records, spec.output)
        logger.info(
            "Suite finished",
            records=len(records),
            solved=sum(r.solved for r in records),
            output=spec.output,
        )
        return records


def run_suite(spec: SuiteSpec, settings: Optional[Settings] = None) -> List[RunRecord]:
    return BenchmarkService(settings).run_suite(spec)


def find_disagreements(records: Sequence[RunRecord]) -> Dict[str, Dict[str, int]]:
    """Instances whose Solved records report more than one weight, with each solver's weights."""
    seen: Dict[str, Dict[str, List[int]]] = {}
    for record in records:
        if record.solved:
            seen.setdefault(record.instance, {}).setdefault(record.solver, []).append(record.weight)
    conflicting: Dict[str, Dict[str, int]] = {}
    for instance_id, per_solver in seen.items():
        distinct = {w for weights in per_solver.values() for w in weights}
        if len(distinct) > 1:
            conflicting[instance_id] = {solver: max(weights) for solver, weights in per_solver.items()}
    return conflicting


def records_to_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [record.model_dump(mode="json") for record in records],
        columns=CSV_COLUMNS,
    )
    frame["weight"] = frame["weight"].astype("Int64")
    frame["partition_seconds"] = frame["partition_seconds"].astype("float64")
    frame["seconds"] = frame["seconds"].astype("float64")
    frame["seed"] = frame["seed"].astype("int64")
    return frame


def frame_to_records(frame: pd.DataFrame) -> List[RunRecord]:
    records = []
    for row in frame.to_dict(orient="records"):
        records.append(
            RunRecord(
                instance=row["instance"],
                solver=row["solver"],
                status=RunStatus(row["status"]),
                seconds=float(row["seconds"]),
                weight=None if pd.isna(row["weight"]) else int(row["weight"]),
                partition_seconds=None if pd.isna(row["partition_seconds"]) else float(row["partition_seconds"]),
                seed=int(row["seed"]),
                config_hash=row["config_hash"],
            )
        )
    return records


def emit_records_csv(records: Sequence[RunRecord]) -> str:
    return records_to_frame(records).to_csv(index=False, lineterminator="\n")


def write_records(records: Sequence[RunRecord], path: PathLike) -> None:
    Path(path).write_text(emit_records_csv(records), encoding="utf-8")
    logger.info("Run records written", path=str(path), records=len(records))


def read_records(path: PathLike) -> List[RunRecord]:
    frame = pd.read_csv(
        path,
        dtype={
            "instance": str,
            "solver": str,
            "status": str,
            "config_hash": str,
            "seed": "int64",
            "seconds": "float64",
            "partition_seconds": "float64",
            "weight": "Int64",
        },
        keep_default_na=False,
        na_values={"weight": [""], "partition_seconds": [""]},
        float_precision="round_trip",
    )
    if list(frame.columns) != CSV_COLUMNS:
        raise ValueError(f"Unexpected CSV header {list(frame.columns)}")
    return frame_to_records(frame)
