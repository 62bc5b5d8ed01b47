"""
Unit tests for configuration loader.
"""

import os
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml

from src.core.config_loader import (
    REQUIRED_SECTIONS,
    get_config_path,
    load_config,
    load_yaml_file,
    merge_with_env,
)
from src.core.defaults import DEFAULT_CONFIG
from src.utils.error_handling import ConfigurationError


class TestGetConfigPath:
    """Tests for get_config_path function."""

    def test_get_config_path_from_cwd(self, tmp_path: Path, monkeypatch):
        """A config/ directory under the working directory is searched first."""
        config_dir = tmp_path / "config"
        config_dir.mkdir()
        (config_dir / "config.yaml").write_text("solver: {}")

        monkeypatch.chdir(tmp_path)

        result = get_config_path("config.yaml")
        assert result == config_dir / "config.yaml"

    def test_get_config_path_project_root(self, tmp_path: Path, monkeypatch):
        """Without a local config/ the checkout's config.yaml is found."""
        monkeypatch.chdir(tmp_path)
        result = get_config_path("config.yaml")
        assert result.name == "config.yaml"
        assert result.parent.name == "config"

    def test_get_config_path_file_not_found(self):
        """Test error when the file doesn't exist in either location."""
        with pytest.raises(ConfigurationError, match="Configuration file not found"):
            get_config_path("nonexistent.yaml")


class TestLoadYamlFile:
    """Tests for load_yaml_file function."""

    def test_load_valid_yaml(self, tmp_path: Path):
        yaml_file = tmp_path / "test.yaml"
        test_data = {"solver": {"grid_points": 500}, "kernel": {"max_order": 32}}

        with open(yaml_file, "w") as f:
            yaml.dump(test_data, f)

        assert load_yaml_file(yaml_file) == test_data

    def test_load_empty_yaml(self, tmp_path: Path):
        yaml_file = tmp_path / "empty.yaml"
        yaml_file.write_text("")

        with pytest.raises(ConfigurationError, match="YAML file is empty"):
            load_yaml_file(yaml_file)

    def test_load_invalid_yaml(self, tmp_path: Path):
        yaml_file = tmp_path / "invalid.yaml"
        yaml_file.write_text("solver: [\ninvalid")

        with pytest.raises(ConfigurationError, match="Failed to parse YAML"):
            load_yaml_file(yaml_file)

    def test_load_non_dict_yaml(self, tmp_path: Path):
        yaml_file = tmp_path / "list.yaml"
        yaml_file.write_text("- kernel\n- solver")

        with pytest.raises(ConfigurationError, match="must contain a dictionary"):
            load_yaml_file(yaml_file)

    def test_load_file_not_found(self, tmp_path: Path):
        with pytest.raises(ConfigurationError, match="Failed to read file"):
            load_yaml_file(tmp_path / "nonexistent.yaml")


class TestLoadConfig:
    """Tests for load_config function."""

    def test_load_config_explicit_path(self, write_config_file: Path, sample_config: dict):
        assert load_config(write_config_file) == sample_config

    def test_load_config_searched_path(self, sample_config: dict, tmp_path: Path):
        mock_path = tmp_path / "config.yaml"
        with patch("src.core.config_loader.get_config_path", return_value=mock_path):
            with patch("src.core.config_loader.load_yaml_file", return_value=sample_config):
                assert load_config() == sample_config

    def test_load_config_falls_back_to_defaults(self):
        """A missing config.yaml is not an error; the built-in defaults apply."""
        with patch(
            "src.core.config_loader.get_config_path",
            side_effect=ConfigurationError("Configuration file not found"),
        ):
            result = load_config()
        assert result == DEFAULT_CONFIG
        assert result is not DEFAULT_CONFIG

    def test_load_config_explicit_missing_file(self, tmp_path: Path):
        with pytest.raises(ConfigurationError, match="Failed to read file"):
            load_config(tmp_path / "missing.yaml")

    def test_load_config_validates_all_required_sections(self, sample_config: dict, tmp_path: Path):
        mock_path = tmp_path / "config.yaml"
        for key in REQUIRED_SECTIONS:
            incomplete_config = sample_config.copy()
            del incomplete_config[key]

            with patch("src.core.config_loader.load_yaml_file", return_value=incomplete_config):
                with pytest.raises(ConfigurationError, match=f"Missing required.*{key}"):
                    load_config(mock_path)

    def test_shipped_config_is_complete(self):
        """The checked-in config/config.yaml carries every required section."""
        config = load_yaml_file(Path(__file__).parents[2] / "config" / "config.yaml")
        assert set(REQUIRED_SECTIONS) <= set(config)


class TestMergeWithEnv:
    """Tests for merge_with_env function."""

    def test_merge_log_level(self, sample_config: dict):
        with patch.dict(os.environ, {"LOG_LEVEL": "debug"}):
            result = merge_with_env(sample_config)
            assert result["logging"]["level"] == "DEBUG"

    def test_merge_log_format(self, sample_config: dict):
        with patch.dict(os.environ, {"LOG_FORMAT": "TEXT"}):
            result = merge_with_env(sample_config)
            assert result["logging"]["format"] == "text"

    def test_merge_workers(self, sample_config: dict):
        with patch.dict(os.environ, {"RING_WORKERS": "4"}):
            result = merge_with_env(sample_config)
            assert result["solver"]["workers"] == 4

    def test_merge_grid_points(self, sample_config: dict):
        with patch.dict(os.environ, {"RING_GRID_POINTS": "1200"}):
            result = merge_with_env(sample_config)
            assert result["solver"]["grid_points"] == 1200

    def test_merge_invalid_integer(self, sample_config: dict):
        """Test an invalid RING_WORKERS is ignored."""
        original = sample_config["solver"]["workers"]

        with patch.dict(os.environ, {"RING_WORKERS": "many"}):
            result = merge_with_env(sample_config)
            assert result["solver"]["workers"] == original

    def test_merge_no_overrides(self, sample_config: dict, clean_env):
        assert merge_with_env(sample_config) == sample_config

    def test_merge_doesnt_modify_original(self, sample_config: dict):
        original = sample_config["solver"]["grid_points"]

        with patch.dict(os.environ, {"RING_GRID_POINTS": "9000"}):
            merge_with_env(sample_config)
            assert sample_config["solver"]["grid_points"] == original
