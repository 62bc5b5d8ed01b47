"""
Pytest configuration and shared fixtures.

This module provides fixtures that are available to all test modules.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Generator
from unittest.mock import patch

import pytest

from src.core.defaults import DEFAULT_CONFIG
from src.core.settings import AppSettings, build_settings
from src.domain.ring import RingConfig


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """
    Clear settings cache before each test.

    This ensures each test gets fresh settings.
    """
    from src.core.settings import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def restore_root_logger() -> Generator[None, None, None]:
    """Undo setup_logging, which replaces the root handlers pytest installed."""
    root = logging.getLogger()
    handlers, level, filters = root.handlers[:], root.level, root.filters[:]
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
    root.filters[:] = filters


@pytest.fixture
def clean_env() -> Generator[None, None, None]:
    """Remove the environment overrides the config loader honours."""
    keys = ("LOG_LEVEL", "LOG_FORMAT", "RING_WORKERS", "RING_GRID_POINTS")
    saved = {k: os.environ.pop(k) for k in keys if k in os.environ}
    yield
    for k in keys:
        os.environ.pop(k, None)
    os.environ.update(saved)


@pytest.fixture
def temp_config_dir(tmp_path: Path) -> Path:
    """
    Create a temporary config directory for testing.

    Args:
        tmp_path: Pytest-provided temporary directory

    Returns:
        Path to temporary config directory
    """
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    return config_dir


@pytest.fixture
def sample_config() -> dict[str, Any]:
    """
    Provide a sample configuration dictionary for testing.

    Returns:
        Sample configuration with a coarser grid than the defaults
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["solver"]["grid_points"] = 800
    config["logging"]["level"] = "INFO"
    config["logging"]["format"] = "json"
    return config


@pytest.fixture
def write_config_file(temp_config_dir: Path, sample_config: dict) -> Path:
    """
    Write a sample config.yaml file.

    Returns:
        Path to written config file
    """
    import yaml

    config_file = temp_config_dir / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump(sample_config, f)

    return config_file


@pytest.fixture
def settings() -> AppSettings:
    """Default settings, independent of any config.yaml on disk."""
    return build_settings(copy.deepcopy(DEFAULT_CONFIG))


@pytest.fixture
def mock_settings(settings: AppSettings) -> Generator[AppSettings, None, None]:
    """Patch the CLI's settings loader to return the default settings."""
    with patch("src.cli.main.load_settings", return_value=settings):
        yield settings


@pytest.fixture
def ring_v25() -> RingConfig:
    """(m=0, v=25, beta=1, r_i=0.2): three levels, 5.10, 10.07, 22.24."""
    return RingConfig(m=0, v=25.0, beta=1.0, r_i=0.2)


@pytest.fixture
def spread_ring() -> RingConfig:
    """(m=1, v=25, beta=1, r_i=0.2): upper level near 17.859."""
    return RingConfig(m=1, v=25.0, beta=1.0, r_i=0.2)


@pytest.fixture
def well_ring() -> RingConfig:
    """(m=1, v=100, beta=10, r_i=0.8): lower level near 21.454."""
    return RingConfig(m=1, v=100.0, beta=10.0, r_i=0.8)
