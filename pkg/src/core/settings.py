"""
Typed solver settings.

Settings are read from config/config.yaml (or the built-in defaults), merged
with environment overrides and validated by pydantic-settings. Library
functions never consult these settings implicitly; the command-line front end
threads them into explicit keyword arguments.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.config_loader import load_config, merge_with_env
from src.utils.error_handling import ConfigurationError

logger = logging.getLogger(__name__)

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class KernelSettings(BaseModel):
    """Bessel kernel settings."""

    max_order: int = 64

    @field_validator("max_order")
    @classmethod
    def validate_max_order(cls, v: int) -> int:
        if v < 1 or v > 1000:
            raise ValueError("max_order must be between 1 and 1000")
        return v


class SolverSettings(BaseModel):
    """Spectrum scan and root refinement settings."""

    grid_points: int = 2000
    tol: float = 1e-10
    threshold_epsilon: float = 1e-9
    refine_factor: int = 10
    workers: int = 1

    @field_validator("grid_points")
    @classmethod
    def validate_grid_points(cls, v: int) -> int:
        if v < 16:
            raise ValueError("grid_points must be at least 16")
        return v

    @field_validator("tol", "threshold_epsilon")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("refine_factor", "workers")
    @classmethod
    def validate_at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v


class WavefunctionSettings(BaseModel):
    """Wavefunction construction and normalization settings."""

    tail_decades: float = 14.0
    max_tail_radius: float = 500.0
    quad_abs_tol: float = 1e-10
    quad_limit: int = 200
    n_points: int = 512

    @field_validator("n_points")
    @classmethod
    def validate_n_points(cls, v: int) -> int:
        if v < 16:
            raise ValueError("n_points must be at least 16")
        return v

    @field_validator("max_tail_radius")
    @classmethod
    def validate_max_tail_radius(cls, v: float) -> float:
        if v <= 1.0:
            raise ValueError("max_tail_radius must exceed the outer radius 1")
        return v


class OracleSettings(BaseModel):
    """ODE-integration oracle settings."""

    start_offset: float = 1e-4
    rtol: float = 1e-11
    atol: float = 1e-14
    scan_points: int = 200
    max_steps: int = 200000
    tol: float = 1e-7
    reorthogonalize_ratio: float = 1e8

    @field_validator("scan_points")
    @classmethod
    def validate_scan_points(cls, v: int) -> int:
        if v < 16:
            raise ValueError("scan_points must be at least 16")
        return v


class OutputSettings(BaseModel):
    """Output configuration settings."""

    default_format: str = "csv"
    decimals: int = 2

    @field_validator("default_format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        if v not in ("csv", "json", "markdown"):
            raise ValueError("default_format must be csv, json or markdown")
        return v


class LoggingSettings(BaseModel):
    """Logging configuration settings."""

    level: str = "WARNING"
    format: str = "text"
    log_file: Optional[str] = None
    max_file_size_mb: int = 10
    backup_count: int = 5

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        v = v.upper()
        if v not in _LOG_LEVELS:
            raise ValueError(f"level must be one of {', '.join(_LOG_LEVELS)}")
        return v

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        if v not in ("json", "text"):
            raise ValueError("format must be json or text")
        return v


class AppSettings(BaseSettings):
    """Top-level settings assembled from YAML, defaults and environment."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    kernel: KernelSettings = Field(default_factory=KernelSettings)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    wavefunction: WavefunctionSettings = Field(default_factory=WavefunctionSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


def build_settings(config: dict[str, Any]) -> AppSettings:
    """
    Validate a configuration dictionary into AppSettings.

    Raises:
        ConfigurationError: If any section fails validation
    """
    try:
        return AppSettings(**config)
    except ValidationError as e:
        raise ConfigurationError(
            "Invalid configuration values",
            details={"errors": [err["msg"] for err in e.errors()]},
        ) from e


def load_settings(path: Optional[Path] = None) -> AppSettings:
    """Load, merge and validate settings from ``path`` or the default search."""
    settings = build_settings(merge_with_env(load_config(path)))
    logger.debug(
        "Settings loaded",
        extra={"grid_points": settings.solver.grid_points, "workers": settings.solver.workers},
    )
    return settings


@lru_cache
def get_settings() -> AppSettings:
    """Cached settings from the default configuration search."""
    return load_settings()


def reload_settings() -> AppSettings:
    """Clear the settings cache and load again."""
    get_settings.cache_clear()
    return get_settings()
