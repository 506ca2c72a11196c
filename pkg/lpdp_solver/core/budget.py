"""
Cooperative time budget for long-running searches
"""

import time
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import SearchTimeout


@dataclass
class SearchBudget:
    """Counts expansions and checks a monotonic deadline every `check_interval` ticks.

    `deadline` is an absolute `time.monotonic()` value, so one budget can be
    shared by the phases of a solve (partitioning, preprocessing, combination).
    """

    deadline: Optional[float] = None
    check_interval: int = 1 << 16
    expansions: int = 0
    _until_check: int = field(default=0, repr=False)

    def __post_init__(self) -> None:
        self._until_check = self.check_interval

    @classmethod
    def from_limit(cls, seconds: Optional[float], check_interval: int = 1 << 16) -> "SearchBudget":
        deadline = None if seconds is None else time.monotonic() + seconds
        return cls(deadline=deadline, check_interval=check_interval)

    def tick(self) -> None:
        """Record one expansion; raise SearchTimeout once past the deadline."""
        self.expansions += 1
        self._until_check -= 1
        if self._until_check <= 0:
            self._until_check = self.check_interval
            self.check()

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise SearchTimeout(details={"expansions": self.expansions})
