"""
Models for graphs, instances, solutions and benchmark records
"""

from .bench import InstanceSpec, RunRecord, RunStatus, ScatterPoint, SolverEntry, SpeedupReport, SuiteSpec
from .graph import FailureReason, Graph, Instance, Path, Verdict
from .maze import MazeGrid, parse_maze_text
from .solution import Solution, SolverConfig, SolveStatus

__all__ = [
    "FailureReason",
    "Graph",
    "Instance",
    "InstanceSpec",
    "RunRecord",
    "RunStatus",
    "ScatterPoint",
    "SolverEntry",
    "SpeedupReport",
    "SuiteSpec",
    "MazeGrid",
    "Path",
    "Solution",
    "SolveStatus",
    "SolverConfig",
    "Verdict",
    "parse_maze_text",
]
