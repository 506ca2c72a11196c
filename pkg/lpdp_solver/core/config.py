"""
Configuration management for the LPDP solver
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver and harness settings with environment variable support"""

    model_config = SettingsConfigDict(
        env_prefix="LPDP_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    PROJECT_NAME: str = Field(default="LPDP Longest Path Solver")
    PROJECT_VERSION: str = Field(default="1.0.0")

    # Global seed fallback (LPDP_SEED)
    SEED: int = Field(default=0)

    # Logging
    LOG_LEVEL: str = Field(default="WARNING")
    LOG_FORMAT: Literal["console", "json"] = Field(default="console")

    # Partitioning
    DEFAULT_IMBALANCE: float = Field(default=0.10, ge=0.0)
    LEAF_TARGET_SIZE: int = Field(default=64, ge=2)
    PARTITION_PRESET: Literal["eco", "strong"] = Field(default="eco")
    BOUNDARY_CAP: int = Field(default=12, ge=2)

    # Search
    TABLE_ENTRY_CAP: int = Field(default=5_000_000, ge=1)
    DEADLINE_CHECK_INTERVAL: int = Field(default=1 << 16, ge=1)

    # Generators
    MAZE_RETRY_BUDGET: int = Field(default=1000, ge=1)
    SUBGRAPH_RETRY_BUDGET: int = Field(default=100, ge=1)

    # Benchmarks
    TIME_LIMIT_SECONDS: float = Field(default=3600.0, gt=0.0)
    TIMEOUT_GRACE: float = Field(default=0.05, ge=0.0)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
