"""
Structured logging configuration for the LPDP solver
"""

import logging
import sys
from typing import Any, Dict, Optional

import structlog

from lpdp_solver.core.config import Settings, get_settings


def setup_logging(settings: Optional[Settings] = None) -> None:
    """Configure structured logging"""

    settings = settings or get_settings()

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer() if settings.LOG_FORMAT == "json"
            else structlog.dev.ConsoleRenderer(colors=False),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # stdout carries solutions and reports
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, settings.LOG_LEVEL.upper()),
        force=True,
    )


class RunAuditLogger:
    """Audit logger for benchmark runs and result cross-checks"""

    def __init__(self):
        self.logger = structlog.get_logger("audit")

    def log_run_record(
        self,
        instance: str,
        solver: str,
        status: str,
        seconds: float,
        weight: Optional[int] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Log one finished benchmark run"""
        self.logger.info(
            "run_record",
            instance=instance,
            solver=solver,
            status=status,
            seconds=round(seconds, 6),
            weight=weight,
            metadata=metadata or {},
        )

    def log_disagreement(
        self,
        instance: str,
        weights: Dict[str, int],
    ) -> None:
        """Log solvers reporting different optima for one instance"""
        self.logger.error(
            "solver_disagreement",
            instance=instance,
            weights=weights,
        )

    def log_invalid_solution(
        self,
        instance: str,
        solver: str,
        reason: str,
    ) -> None:
        """Log a Solved record whose path failed validation"""
        self.logger.error(
            "invalid_solution",
            instance=instance,
            solver=solver,
            reason=reason,
        )
