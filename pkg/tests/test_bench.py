"""
Tests for the benchmark runner, CSV persistence and reports
"""

import math

import pytest
from pydantic import ValidationError

from lpdp_solver.core.exceptions import EmptySeriesError, NoCommonInstancesError
from lpdp_solver.core.logging import RunAuditLogger
from lpdp_solver.models.bench import (
    CSV_COLUMNS,
    InstanceSpec,
    RunRecord,
    RunStatus,
    SolverEntry,
    SuiteSpec,
    family_of,
)
from lpdp_solver.models.solution import SolverConfig
from lpdp_solver.services.benchmark_service import (
    BenchmarkService,
    emit_records_csv,
    find_disagreements,
    read_records,
    run_suite,
    write_records,
)
from lpdp_solver.services.instance_generator import generate_maze, maze_to_instance
from lpdp_solver.services.metis_io import write_graph
from lpdp_solver.services.report_service import (
    aggregate_runs,
    cactus_data,
    emit_plots,
    render_cactus_svg,
    render_scatter_svg,
    scatter_data,
    solved_counts,
    speedup_report,
)


def record(instance, solver, status="Solved", seconds=1.0, weight=None, **extra):
    status = RunStatus(status)
    if status is RunStatus.SOLVED and weight is None:
        weight = 10
    return RunRecord(instance=instance, solver=solver, status=status, seconds=seconds, weight=weight, **extra)


@pytest.fixture
def maze_spec():
    return {"kind": "maze", "side": 5, "fill": 0.3, "seed": 1}


@pytest.fixture
def mixed_records():
    return [
        record("maze-a", "lpdp", seconds=0.5, weight=12, partition_seconds=0.01, config_hash="abc"),
        record("maze-a", "exhdfs", seconds=2.25, weight=12),
        record("maze-b", "lpdp", "Timeout", seconds=60.0),
        record("maze-b", "exhdfs", "NoPath", seconds=0.125),
        record("random-c", "lpdp", "Error", seconds=0.0, seed=7),
    ]


class TestRunRecord:
    """Test run record validation"""

    def test_solved_needs_weight(self):
        with pytest.raises(ValidationError):
            RunRecord(instance="maze-a", solver="lpdp", status=RunStatus.SOLVED, seconds=1.0)

    def test_unsolved_has_no_weight(self):
        with pytest.raises(ValidationError):
            RunRecord(instance="maze-a", solver="lpdp", status=RunStatus.TIMEOUT, seconds=1.0, weight=3)

    def test_family_is_the_id_prefix(self):
        assert family_of("maze-n10-o30-s7") == "maze"
        assert record("subgraph-r1-z14-s0", "lpdp").family == "subgraph"


class TestSuiteSpec:
    """Test suite file parsing"""

    def test_solver_names_as_shorthand(self, maze_spec):
        spec = SuiteSpec(instances=[maze_spec], solvers=["lpdp", "exhdfs"])
        assert [entry.name for entry in spec.solvers] == ["lpdp", "exhdfs"]
        assert spec.solvers[1].config.solver == "exhdfs"
        assert spec.time_limit == 3600.0

    def test_empty_lists_rejected(self, maze_spec):
        with pytest.raises(ValidationError):
            SuiteSpec(instances=[], solvers=["lpdp"])
        with pytest.raises(ValidationError):
            SuiteSpec(instances=[maze_spec], solvers=[])

    def test_time_limit_must_be_positive(self, maze_spec):
        with pytest.raises(ValidationError):
            SuiteSpec(instances=[maze_spec], solvers=["lpdp"], time_limit=0)

    def test_generator_fields_required(self):
        with pytest.raises(ValidationError):
            InstanceSpec(kind="maze", side=5)

    def test_file_instance(self, tmp_path):
        instance = maze_to_instance(generate_maze(4, 0.0, seed=0))
        path = tmp_path / "grid.graph"
        write_graph(path, instance.graph)
        built = InstanceSpec(kind="file", path=str(path), source=1, target=16).build()
        assert built.name == "file-grid"
        assert (built.source, built.target) == (0, 15)
        assert built.graph == instance.graph

    def test_explicit_id_names_the_instance(self, maze_spec):
        assert InstanceSpec(id="maze-small", **maze_spec).build().name == "maze-small"


class TestRunSuite:
    """Test suite execution"""

    def test_two_solvers_agree(self, maze_spec, settings):
        spec = SuiteSpec(instances=[maze_spec], solvers=["lpdp", "exhdfs"], time_limit=60, in_process=True)
        records = run_suite(spec, settings)
        assert [(r.solver, r.status) for r in records] == [("lpdp", RunStatus.SOLVED), ("exhdfs", RunStatus.SOLVED)]
        assert records[0].weight == records[1].weight
        assert records[0].partition_seconds is not None
        assert records[1].partition_seconds is None
        assert records[0].instance == "maze-n5-o7-s1"

    def test_repetitions_and_output(self, maze_spec, settings, tmp_path):
        out = tmp_path / "runs.csv"
        spec = SuiteSpec(
            instances=[maze_spec],
            solvers=["exhdfs"],
            time_limit=60,
            repetitions=3,
            output=str(out),
            in_process=True,
        )
        records = run_suite(spec, settings)
        assert len(records) == 3
        assert read_records(out) == records

    def test_isolated_run(self, maze_spec, settings):
        spec = SuiteSpec(instances=[maze_spec], solvers=["exhdfs"], time_limit=60)
        records = run_suite(spec, settings)
        assert records[0].status is RunStatus.SOLVED

    def test_parallel_runs_keep_suite_order(self, settings):
        instances = [
            {"kind": "maze", "side": 5, "fill": 0.3, "seed": 1},
            {"kind": "random", "n": 9, "p": 0.4, "max_weight": 5, "seed": 2},
            {"kind": "maze", "side": 4, "fill": 0.0, "seed": 0},
        ]
        base = dict(instances=instances, solvers=["lpdp", "exhdfs"], time_limit=60, repetitions=2, in_process=True)
        serial = run_suite(SuiteSpec(**base), settings)
        parallel = run_suite(SuiteSpec(jobs=2, **base), settings)

        def key(r):
            return (r.instance, r.solver, r.status, r.weight, r.seed, r.config_hash)

        assert len(parallel) == 12
        assert [key(r) for r in parallel] == [key(r) for r in serial]

    def test_parallel_isolated_runs(self, settings):
        instances = [
            {"kind": "maze", "side": 4, "fill": 0.0, "seed": 0},
            {"kind": "maze", "side": 5, "fill": 0.3, "seed": 1},
        ]
        spec = SuiteSpec(instances=instances, solvers=["exhdfs"], time_limit=60, jobs=2)
        records = run_suite(spec, settings)
        assert [r.instance for r in records] == ["maze-n4-o0-s0", "maze-n5-o7-s1"]
        assert all(r.status is RunStatus.SOLVED for r in records)

    def test_jobs_must_be_positive(self, maze_spec):
        with pytest.raises(ValidationError):
            SuiteSpec(instances=[maze_spec], solvers=["lpdp"], jobs=0)

    def test_tiny_limit_times_out(self, settings):
        instance = maze_to_instance(generate_maze(30, 0.0, seed=0))
        service = BenchmarkService(settings)
        entry = SolverEntry(name="exhdfs", config=SolverConfig(solver="exhdfs"))
        assert service.run_one(instance, entry, 0.001, in_process=True).status is RunStatus.TIMEOUT
        assert service.run_one(instance, entry, 0.001).status is RunStatus.TIMEOUT

    def test_solver_crash_becomes_error_record(self, settings, mocker):
        instance = maze_to_instance(generate_maze(4, 0.0, seed=0))
        service = BenchmarkService(settings)
        mocker.patch.object(service.solver_service, "solve", side_effect=RuntimeError("boom"))
        entry = SolverEntry(name="lpdp")
        result = service.run_one(instance, entry, 10.0, in_process=True)
        assert result.status is RunStatus.ERROR
        assert result.weight is None

    def test_invalid_path_becomes_error_record(self, settings, mocker):
        instance = maze_to_instance(generate_maze(4, 0.0, seed=0))
        audit = RunAuditLogger()
        log_invalid = mocker.spy(audit, "log_invalid_solution")
        service = BenchmarkService(settings, audit)
        bogus = {"status": "Solved", "weight": 6, "path": [0, 15], "elapsed": 0.1, "expanded": 1, "timings": {}}
        mocker.patch.object(service, "_run_inline", return_value={"kind": "ok", "payload": bogus})
        result = service.run_one(instance, SolverEntry(name="lpdp"), 10.0, in_process=True)
        assert result.status is RunStatus.ERROR
        log_invalid.assert_called_once_with(instance.name, "lpdp", "NonEdge")


class TestCsv:
    """Test CSV persistence"""

    def test_round_trip(self, mixed_records, tmp_path):
        path = tmp_path / "runs.csv"
        write_records(mixed_records, path)
        assert read_records(path) == mixed_records

    def test_header_and_empty_cells(self, mixed_records):
        lines = emit_records_csv(mixed_records).split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("maze-a,lpdp,Solved,0.5,12,0.01,0,")
        assert lines[3] == "maze-b,lpdp,Timeout,60.0,,,0,"

    def test_deterministic(self, mixed_records):
        assert emit_records_csv(mixed_records) == emit_records_csv(list(mixed_records))

    def test_unexpected_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("instance,solver\nmaze-a,lpdp\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_records(path)


class TestReports:
    """Test cactus, speedup, scatter and count reports"""

    def test_cactus_drops_unsolved(self):
        records = [
            record("maze-a", "x", seconds=3.0),
            record("maze-b", "x", seconds=1.0),
            record("maze-c", "x", "Timeout", seconds=60.0),
        ]
        assert cactus_data(records, "x") == [(1, 1.0), (2, 3.0)]

    def test_cactus_without_solved_records(self):
        assert cactus_data([record("maze-a", "x", "Timeout", seconds=5.0)], "x") == []

    def test_cactus_length_is_solved_count(self, mixed_records):
        series = cactus_data(mixed_records, "lpdp")
        assert len(series) == 1
        seconds = [s for _, s in cactus_data(mixed_records + [record("maze-z", "lpdp", seconds=0.1)], "lpdp")]
        assert seconds == sorted(seconds)

    def test_repetitions_use_the_median(self):
        records = [record("maze-a", "x", seconds=s) for s in (5.0, 1.0, 2.0)]
        assert cactus_data(records, "x") == [(1, 2.0)]

    def test_one_failed_repetition_unsolves_the_instance(self):
        records = [record("maze-a", "x", seconds=1.0), record("maze-a", "x", "Timeout", seconds=60.0)]
        assert not aggregate_runs(records)[("maze-a", "x")].solved
        assert cactus_data(records, "x") == []

    def test_speedup(self):
        records = [
            record("maze-a", "base", seconds=2.0),
            record("maze-b", "base", seconds=8.0),
            record("maze-a", "new", seconds=1.0),
            record("maze-b", "new", seconds=2.0),
        ]
        report = speedup_report(records, "base", "new")
        assert report.ratios == {"maze-a": 2.0, "maze-b": 4.0}
        assert report.mean == pytest.approx(3.0)
        assert report.geometric_mean == pytest.approx(math.sqrt(8.0))
        assert report.instances == 2

    def test_identical_solvers(self):
        records = [record(f"maze-{i}", s, seconds=1.5) for i in range(3) for s in ("a", "b")]
        assert set(speedup_report(records, "a", "b").ratios.values()) == {1.0}

    def test_speedup_uses_common_instances_only(self):
        records = [
            record("maze-a", "base", seconds=4.0),
            record("maze-a", "new", seconds=1.0),
            record("maze-b", "base", seconds=9.0),
            record("maze-b", "new", "Timeout", seconds=60.0),
            record("maze-c", "new", seconds=0.5),
        ]
        assert speedup_report(records, "base", "new").ratios == {"maze-a": 4.0}

    def test_no_common_instances(self):
        records = [record("maze-a", "base"), record("maze-b", "new")]
        with pytest.raises(NoCommonInstancesError):
            speedup_report(records, "base", "new")

    def test_scatter_points(self):
        records = [
            record("maze-a", "A", seconds=1.0),
            record("maze-a", "B", seconds=2.0),
            record("maze-b", "A", "Timeout", seconds=61.0),
            record("maze-b", "B", seconds=5.0),
        ]
        points = scatter_data(records, "A", "B", time_limit=60.0)
        assert len(points) == 2
        assert (points[0].a_seconds, points[0].b_seconds) == (1.0, 2.0)
        assert points[0].b_seconds > points[0].a_seconds
        assert (points[1].a_seconds, points[1].b_seconds) == (60.0, 5.0)
        assert points[1].a_rail and not points[1].b_rail

    def test_no_path_is_not_on_the_rail(self, mixed_records):
        points = scatter_data(mixed_records, "lpdp", "exhdfs", time_limit=60.0)
        by_instance = {p.instance: p for p in points}
        assert by_instance["maze-b"].a_rail
        assert not by_instance["maze-b"].b_rail

    def test_solved_counts(self, mixed_records):
        counts = solved_counts(mixed_records)
        assert list(counts.columns) == ["exhdfs", "lpdp"]
        assert counts.loc["maze", "lpdp"] == 1
        assert counts.loc["maze", "exhdfs"] == 1
        assert counts.loc["random", "lpdp"] == 0

    def test_disagreements(self):
        records = [
            record("maze-a", "lpdp", weight=12),
            record("maze-a", "exhdfs", weight=11),
            record("maze-b", "lpdp", weight=3),
            record("maze-b", "exhdfs", weight=3),
        ]
        assert find_disagreements(records) == {"maze-a": {"lpdp": 12, "exhdfs": 11}}


class TestSvg:
    """Test SVG rendering"""

    def test_cactus_markers(self):
        svg = render_cactus_svg({"lpdp": [(1, 0.5), (2, 3.0)]})
        assert svg.count('<circle class="point"') == 2
        assert svg.startswith("<?xml")

    def test_cactus_is_deterministic(self):
        series = {"lpdp": [(1, 0.5), (2, 3.0)], "exhdfs": [(1, 2.0)]}
        assert render_cactus_svg(series) == render_cactus_svg(dict(reversed(list(series.items()))))

    def test_scatter_rail_marker(self):
        records = [
            record("maze-a", "A", seconds=1.0),
            record("maze-a", "B", seconds=2.0),
            record("maze-b", "A", "Timeout", seconds=60.0),
            record("maze-b", "B", seconds=5.0),
        ]
        svg = render_scatter_svg(scatter_data(records, "A", "B", 60.0), "A", "B", 60.0)
        assert svg.count('<circle class="point') == 2
        assert svg.count('class="point rail"') == 1

    def test_empty_series(self):
        with pytest.raises(EmptySeriesError):
            render_cactus_svg({"lpdp": []})
        with pytest.raises(EmptySeriesError):
            render_scatter_svg([], "A", "B", 60.0)

    def test_emit_plots(self, mixed_records, tmp_path):
        written = emit_plots(mixed_records, tmp_path / "plots", time_limit=60.0)
        assert [p.name for p in written] == ["cactus.svg", "scatter.svg"]
        again = emit_plots(mixed_records, tmp_path / "again", time_limit=60.0)
        assert [p.read_bytes() for p in written] == [p.read_bytes() for p in again]
