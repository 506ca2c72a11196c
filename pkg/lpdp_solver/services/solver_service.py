"""
Solver dispatch: one entry point for LPDP and exhaustive DFS
"""

from typing import Optional

import structlog

from ..core.budget import SearchBudget
from ..core.config import Settings, get_settings
from ..core.exceptions import InvalidParameterError
from ..core.exhaustive import exhaustive_dfs
from ..core.lpdp.combine import solve_lpdp
from ..core.monitoring import RUN_OUTCOMES, SEARCH_EXPANSIONS, SOLVE_DURATION
from ..core.paths import validate_path
from ..models.graph import Graph, Instance, Verdict
from ..models.solution import Solution, SolverConfig
from .instance_generator import anypair_reduction

logger = structlog.get_logger(__name__)

SOLVERS = ("lpdp", "exhdfs")


class SolverService:
    """Runs a configured solver on an instance and records metrics."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def solve(
        self,
        instance: Instance,
        config: Optional[SolverConfig] = None,
        time_limit: Optional[float] = None,
    ) -> Solution:
        """Solve `instance`; with `config.any_pair` the longest path between any two vertices."""
        config = config or SolverConfig(seed=self.settings.SEED)
        if config.any_pair:
            return self.solve_any_pair(instance.graph, config, time_limit, name=instance.name)
        return self._dispatch(instance, config, time_limit)

    def solve_any_pair(
        self,
        g: Graph,
        config: Optional[SolverConfig] = None,
        time_limit: Optional[float] = None,
        name: str = "",
    ) -> Solution:
        """Longest simple path between any two vertices via the any-pair reduction."""
        config = config or SolverConfig(seed=self.settings.SEED, any_pair=True)
        if config.partition_file:
            raise InvalidParameterError(
                "Any-pair solving adds two vertices; partition files cannot cover them",
                details={"partition_file": config.partition_file},
            )
        if config.solver == "lpdp" and config.k is None:
            # virtual endpoints touch every vertex: keep a single block
            config = config.model_copy(update={"k": 1})
        reduced = anypair_reduction(g)
        if name:
            reduced = Instance(reduced.graph, reduced.source, reduced.target, name=name)
        solution = self._dispatch(reduced, config, time_limit)
        if solution.solved:
            # drop the two virtual endpoints
            solution = solution.model_copy(update={"path": solution.path[1:-1]})
        return solution

    def _dispatch(self, instance: Instance, config: SolverConfig, time_limit: Optional[float]) -> Solution:
        if config.solver == "exhdfs":
            budget = SearchBudget.from_limit(time_limit, self.settings.DEADLINE_CHECK_INTERVAL)
            solution = exhaustive_dfs(instance, budget=budget)
        else:
            solution = solve_lpdp(instance, config, time_limit, self.settings)

        SEARCH_EXPANSIONS.labels(solver=config.solver).inc(solution.expanded)
        SOLVE_DURATION.labels(solver=config.solver).observe(solution.elapsed)
        RUN_OUTCOMES.labels(solver=config.solver, status=solution.status.value).inc()
        logger.info(
            "Solve finished",
            instance=instance.name,
            solver=config.solver,
            status=solution.status.value,
            weight=solution.weight,
            seconds=round(solution.elapsed, 6),
            expanded=solution.expanded,
        )
        return solution

    @staticmethod
    def verify(instance: Instance, solution: Solution, any_pair: bool = False) -> Verdict:
        """Validate a Solved solution's path against its instance."""
        path = solution.path or []
        if any_pair and path:
            return validate_path(instance.graph, path, path[0], path[-1])
        return validate_path(instance.graph, path, instance.source, instance.target)
