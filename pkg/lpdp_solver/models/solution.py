"""
Solver configuration and solution models
"""

import hashlib
from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SolveStatus(str, Enum):
    """Outcome of a single solve."""
    SOLVED = "Solved"
    NO_PATH = "NoPath"
    TIMEOUT = "Timeout"


class Solution(BaseModel):
    """Result of one solver call; vertex ids refer to the solved instance."""

    model_config = ConfigDict(use_enum_values=False)

    status: SolveStatus
    weight: Optional[int] = Field(None, ge=0)
    path: Optional[List[int]] = None
    elapsed: float = Field(0.0, ge=0.0, description="Wall-clock seconds")
    expanded: int = Field(0, ge=0, description="Search nodes expanded")
    timings: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _solved_has_answer(self) -> "Solution":
        if self.status is SolveStatus.SOLVED and (self.weight is None or not self.path):
            raise ValueError("Solved solutions carry a weight and a nonempty path")
        if self.status is not SolveStatus.SOLVED and (self.weight is not None or self.path):
            raise ValueError("Only Solved solutions carry a weight or path")
        return self

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


class SolverConfig(BaseModel):
    """Options of one solver invocation."""

    model_config = ConfigDict(frozen=True)

    solver: Literal["lpdp", "exhdfs"] = "lpdp"
    k: Optional[int] = Field(None, ge=1, description="Leaf blocks; power of two")
    imbalance: float = Field(0.10, ge=0.0)
    boundary_cap: int = Field(12, ge=2)
    partition_file: Optional[str] = None
    allow_imbalance: bool = False
    seed: int = 0
    preset: Literal["eco", "strong"] = "eco"
    symmetry_pruning: bool = True
    flat_hierarchy: bool = False
    jobs: int = Field(1, ge=1)
    any_pair: bool = False

    def config_hash(self) -> str:
        """Short stable digest of the canonical JSON form."""
        payload = self.model_dump_json(exclude={"seed"}).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:12]
