"""
Scaled performance check: LPDP against exhaustive DFS on 20x20 mazes
"""

import pytest

from lpdp_solver.models.bench import SuiteSpec
from lpdp_solver.services.benchmark_service import find_disagreements, run_suite
from lpdp_solver.services.report_service import aggregate_runs, speedup_report


@pytest.mark.slow
class TestMazeSuite:
    """LPDP with sixteen leaf blocks solves more mazes than exhaustive search"""

    def test_lpdp_beats_exhaustive_dfs(self, settings):
        spec = SuiteSpec(
            instances=[{"kind": "maze", "side": 20, "fill": 0.3, "seed": seed} for seed in range(10)],
            solvers=[
                {"name": "lpdp", "config": {"solver": "lpdp", "k": 16}},
                {"name": "exhdfs", "config": {"solver": "exhdfs"}},
            ],
            time_limit=60.0,
            jobs=2,
        )
        records = run_suite(spec, settings)
        assert not find_disagreements(records)

        runs = aggregate_runs(records)
        solved = {
            name: sum(r.solved for (_, solver), r in runs.items() if solver == name)
            for name in ("lpdp", "exhdfs")
        }
        assert solved["lpdp"] > solved["exhdfs"]
        if solved["exhdfs"]:
            assert speedup_report(records, "exhdfs", "lpdp").mean > 1.0
