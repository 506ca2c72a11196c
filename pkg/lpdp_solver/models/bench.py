"""
Benchmark suite, run record and report models
"""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .graph import Instance
from .solution import SolverConfig

CSV_COLUMNS = [
    "instance",
    "solver",
    "status",
    "seconds",
    "weight",
    "partition_seconds",
    "seed",
    "config_hash",
]


class RunStatus(str, Enum):
    """Outcome of one benchmark run."""
    SOLVED = "Solved"
    NO_PATH = "NoPath"
    TIMEOUT = "Timeout"
    ERROR = "Error"


def family_of(instance_id: str) -> str:
    """Instance family: the id prefix before the first '-'."""
    return instance_id.split("-", 1)[0]


class RunRecord(BaseModel):
    """One (instance, solver, repetition) result; field order is the CSV column order."""

    instance: str
    solver: str
    status: RunStatus
    seconds: float = Field(..., ge=0.0)
    weight: Optional[int] = Field(None, ge=0)
    partition_seconds: Optional[float] = Field(None, ge=0.0)
    seed: int = 0
    config_hash: str = ""

    @model_validator(mode="after")
    def _weight_iff_solved(self) -> "RunRecord":
        if (self.status is RunStatus.SOLVED) != (self.weight is not None):
            raise ValueError("weight is present exactly for Solved records")
        return self

    @property
    def family(self) -> str:
        return family_of(self.instance)

    @property
    def solved(self) -> bool:
        return self.status is RunStatus.SOLVED


class InstanceSpec(BaseModel):
    """A suite instance: a METIS file or a seeded generator call.

    File sources and targets are 1-based like the CLI.
    """

    kind: Literal["file", "maze", "subgraph", "random"]
    id: Optional[str] = None
    path: Optional[str] = None
    source: Optional[int] = Field(None, ge=1)
    target: Optional[int] = Field(None, ge=1)
    side: Optional[int] = Field(None, ge=2)
    fill: Optional[float] = Field(None, ge=0.0, lt=1.0)
    size: Optional[int] = Field(None, ge=2)
    n: Optional[int] = Field(None, ge=2)
    p: Optional[float] = Field(None, ge=0.0, le=1.0)
    max_weight: int = Field(1, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _required_fields(self) -> "InstanceSpec":
        required = {
            "file": ("path", "source", "target"),
            "maze": ("side", "fill"),
            "subgraph": ("path", "size"),
            "random": ("n", "p"),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind} instances need {', '.join(missing)}")
        return self

    def build(self) -> Instance:
        """Materialize the instance; its name is the suite instance id."""
        # deferred: services import these models
        from ..services import instance_generator as gen
        from ..services.metis_io import read_graph

        if self.kind == "file":
            graph = read_graph(self.path)
            instance = Instance(graph, self.source - 1, self.target - 1, name=f"file-{Path(self.path).stem}")
        elif self.kind == "maze":
            instance = gen.maze_to_instance(gen.generate_maze(self.side, self.fill, self.seed))
        elif self.kind == "subgraph":
            instance = gen.extract_bfs_subgraph(read_graph(self.path), self.size, self.seed)
        else:
            instance = gen.random_instance(self.n, self.p, self.max_weight, self.seed)
        if self.id:
            instance = Instance(instance.graph, instance.source, instance.target, name=self.id)
        return instance


class SolverEntry(BaseModel):
    """A named solver configuration; the name is the CSV `solver` column."""

    name: str
    config: SolverConfig = Field(default_factory=SolverConfig)


class SuiteSpec(BaseModel):
    instances: List[InstanceSpec] = Field(..., min_length=1)
    solvers: List[SolverEntry] = Field(..., min_length=1)
    time_limit: float = Field(3600.0, gt=0.0)
    repetitions: int = Field(1, ge=1)
    output: Optional[str] = None
    in_process: bool = Field(False, description="Run solvers in this process without a kill switch")
    jobs: int = Field(1, ge=1, description="Runs dispatched in parallel, each with its own timer")

    @field_validator("solvers", mode="before")
    @classmethod
    def _solver_names(cls, value):
        """Accept plain solver names as shorthand."""
        if isinstance(value, list):
            return [
                {"name": item, "config": {"solver": item}} if isinstance(item, str) else item
                for item in value
            ]
        return value


class ScatterPoint(BaseModel):
    instance: str
    a_seconds: float
    b_seconds: float
    a_rail: bool = False
    b_rail: bool = False


class SpeedupReport(BaseModel):
    baseline: str
    subject: str
    ratios: Dict[str, float]
    mean: float
    geometric_mean: float

    @property
    def instances(self) -> int:
        return len(self.ratios)
