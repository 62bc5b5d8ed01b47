"""Configuration loading and typed settings."""

from src.core.config_loader import load_config, merge_with_env
from src.core.settings import AppSettings, get_settings, load_settings, reload_settings

__all__ = [
    # Config loader
    "load_config",
    "merge_with_env",
    # Settings
    "AppSettings",
    "get_settings",
    "load_settings",
    "reload_settings",
]
