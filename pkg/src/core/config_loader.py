"""
Configuration loader for YAML files.

This module handles loading and parsing the solver's YAML configuration and
applying environment-variable overrides on top of it.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Optional

import yaml

from src.core.defaults import DEFAULT_CONFIG
from src.utils.error_handling import ConfigurationError

logger = logging.getLogger(__name__)

CONFIG_FILENAME = "config.yaml"
REQUIRED_SECTIONS = ["kernel", "solver", "wavefunction", "oracle", "logging"]


def get_config_path(filename: str) -> Path:
    """
    Get the path to a configuration file.

    Searches for configuration files in two locations:
    1. ``config/`` under the current working directory
    2. ``config/`` under the project root (for running from a checkout)

    Args:
        filename: Name of the configuration file (e.g., 'config.yaml')

    Returns:
        Path to the configuration file

    Raises:
        ConfigurationError: If the file doesn't exist in either location
    """
    cwd_config_path = Path.cwd() / "config" / filename
    if cwd_config_path.exists():
        return cwd_config_path

    project_root = Path(__file__).parent.parent.parent
    config_path = project_root / "config" / filename

    if not config_path.exists():
        raise ConfigurationError(
            f"Configuration file not found: {config_path}. "
            f"Searched locations: {cwd_config_path}, {config_path}.",
            details={"filename": filename},
        )

    return config_path


def load_yaml_file(file_path: Path) -> dict[str, Any]:
    """
    Load and parse a YAML file.

    Args:
        file_path: Path to the YAML file

    Returns:
        Parsed YAML content as a dictionary

    Raises:
        ConfigurationError: If file cannot be loaded or parsed
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            content = yaml.safe_load(f)

        if content is None:
            raise ConfigurationError(f"YAML file is empty: {file_path}")

        if not isinstance(content, dict):
            raise ConfigurationError(
                f"YAML file must contain a dictionary at root level: {file_path}"
            )

        return content

    except yaml.YAMLError as e:
        raise ConfigurationError(f"Failed to parse YAML file {file_path}: {e}") from e
    except OSError as e:
        raise ConfigurationError(f"Failed to read file {file_path}: {e}") from e


def load_config(path: Optional[Path] = None) -> dict[str, Any]:
    """
    Load the solver configuration.

    An explicit ``path`` must exist. Without one, ``config/config.yaml`` is
    searched for and the built-in defaults are used when it is absent.

    Args:
        path: Optional explicit configuration file

    Returns:
        Configuration dictionary

    Raises:
        ConfigurationError: If the file is unreadable or misses a required section
    """
    if path is None:
        try:
            path = get_config_path(CONFIG_FILENAME)
        except ConfigurationError:
            logger.debug("No configuration file found, using built-in defaults")
            return copy.deepcopy(DEFAULT_CONFIG)

    config = load_yaml_file(path)

    missing_keys = [key for key in REQUIRED_SECTIONS if key not in config]
    if missing_keys:
        raise ConfigurationError(
            f"Missing required configuration sections: {', '.join(missing_keys)}",
            details={"path": str(path)},
        )

    return config


def _int_override(merged: dict[str, Any], section: str, key: str, raw: str) -> None:
    try:
        merged[section][key] = int(raw)
    except (ValueError, KeyError):
        logger.warning(
            "Ignoring invalid integer override",
            extra={"section": section, "key": key, "value": raw},
        )


def merge_with_env(config: dict[str, Any]) -> dict[str, Any]:
    """
    Merge configuration with environment variable overrides.

    Environment variables can override specific values:
    - LOG_LEVEL -> logging.level
    - LOG_FORMAT -> logging.format
    - RING_WORKERS -> solver.workers
    - RING_GRID_POINTS -> solver.grid_points

    Args:
        config: Base configuration dictionary

    Returns:
        Configuration with environment overrides applied (the input is not modified)
    """
    merged = copy.deepcopy(config)

    if log_level := os.getenv("LOG_LEVEL"):
        if "logging" in merged:
            merged["logging"]["level"] = log_level.upper()

    if log_format := os.getenv("LOG_FORMAT"):
        if "logging" in merged:
            merged["logging"]["format"] = log_format.lower()

    if workers := os.getenv("RING_WORKERS"):
        _int_override(merged, "solver", "workers", workers)

    if grid_points := os.getenv("RING_GRID_POINTS"):
        _int_override(merged, "solver", "grid_points", grid_points)

    return merged
