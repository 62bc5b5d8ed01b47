"""Utility modules."""

from src.utils.error_handling import (
    ConfigurationError,
    InvalidParameterError,
    KernelDomainError,
    LevelIndexError,
    OrderOverflowError,
    QuadratureError,
    RankDeficiencyError,
    RingSolverError,
    SingularityError,
    StiffnessError,
    ThresholdError,
    format_exception_for_logging,
)
from src.utils.logging_config import get_logger, setup_logging

__all__ = [
    # Error handling
    "ConfigurationError",
    "InvalidParameterError",
    "KernelDomainError",
    "LevelIndexError",
    "OrderOverflowError",
    "QuadratureError",
    "RankDeficiencyError",
    "RingSolverError",
    "SingularityError",
    "StiffnessError",
    "ThresholdError",
    "format_exception_for_logging",
    # Logging
    "get_logger",
    "setup_logging",
]
