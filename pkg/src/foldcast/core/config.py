"""
foldcast - Configuration

Centralized runtime configuration for the forecasting engine, the benchmark
harness and the CLI. Every setting can be overridden through a
``FOLDCAST_``-prefixed environment variable or a ``.env`` file.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with validation."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="FOLDCAST_",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "foldcast"
    VERSION: str = "1.0.0"
    ENV: str = "development"
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = False

    # Fold engine
    BATCH_WORKERS: int = Field(
        default=1,
        description="Worker threads used by batch_map (1 runs sequentially)",
    )
    OPTIMIZER_MAX_ITER: int = Field(
        default=500,
        description="Maximum projected-gradient iterations",
    )
    OPTIMIZER_GTOL: float = Field(
        default=1e-6,
        description="Convergence threshold on the projected gradient infinity-norm",
    )
    OPTIMIZER_STEP_TOL: float = Field(
        default=1e-10,
        description="Convergence threshold on the accepted step length",
    )
    OPTIMIZER_DIVERGENCE_FLOOR: float = Field(
        default=-1e12,
        description="Objective values below this floor are treated as divergence",
    )

    # Exponential smoothing
    SMOOTHING_LOWER_BOUND: float = 0.0001
    SMOOTHING_UPPER_BOUND: float = 0.9999
    SMOOTHING_INIT: float = 0.1

    # Benchmark protocol
    BENCH_HOLDOUT: int = Field(
        default=24,
        description="Holdout length H used for accuracy metrics",
    )
    BENCH_WARM_ITERS: int = Field(
        default=5,
        description="Number of warm repetitions N averaged into T_warm",
    )
    BENCH_SEED: int = 0
    BENCH_TIMING_WORKER: Literal["process", "thread"] = Field(
        default="process",
        description="Worker that runs each timed cell; a process worker is forked per cell",
    )

    # Metrics
    METRICS_ENABLED: bool = True

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level against the stdlib names."""
        valid_levels = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
        if v.upper() not in valid_levels:
            raise ValueError(f"LOG_LEVEL must be one of: {valid_levels}")
        return v.upper()

    @field_validator("BATCH_WORKERS", "OPTIMIZER_MAX_ITER", "BENCH_HOLDOUT", "BENCH_WARM_ITERS")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @model_validator(mode="after")
    def _check_smoothing_box(self) -> "Settings":
        lo, hi = self.SMOOTHING_LOWER_BOUND, self.SMOOTHING_UPPER_BOUND
        if not 0.0 < lo < hi < 1.0:
            raise ValueError(
                "smoothing bounds must satisfy 0 < lower < upper < 1, "
                f"got ({lo}, {hi})"
            )
        if not lo <= self.SMOOTHING_INIT <= hi:
            raise ValueError("SMOOTHING_INIT must lie inside the smoothing bounds")
        return self

    @property
    def smoothing_bounds(self) -> tuple[float, float]:
        """Box applied to every fitted smoothing parameter."""
        return (self.SMOOTHING_LOWER_BOUND, self.SMOOTHING_UPPER_BOUND)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
