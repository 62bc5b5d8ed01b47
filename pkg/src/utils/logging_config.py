"""
Logging configuration for the solver and its command-line front end.

Console output goes to stderr: stdout is reserved for CSV, JSON and markdown
results.
"""

import json
import logging
import logging.handlers
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

_RESERVED_ATTRS = frozenset(
    {
        "name",
        "msg",
        "args",
        "created",
        "filename",
        "funcName",
        "levelname",
        "levelno",
        "lineno",
        "module",
        "msecs",
        "message",
        "pathname",
        "process",
        "processName",
        "relativeCreated",
        "thread",
        "threadName",
        "taskName",
        "exc_info",
        "exc_text",
        "stack_info",
        "run_context",
    }
)


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """
        Format log record as JSON.

        Args:
            record: Log record to format

        Returns:
            JSON-formatted log string
        """
        log_data: dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        if hasattr(record, "run_context"):
            log_data["run_context"] = record.run_context

        # Extra fields passed via ``extra={...}``
        for key, value in record.__dict__.items():
            if key not in _RESERVED_ATTRS:
                log_data[key] = value

        return json.dumps(log_data, default=str)


class TextFormatter(logging.Formatter):
    """Human-readable text formatter."""

    def __init__(self):
        super().__init__(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )


def setup_logging(settings=None) -> None:
    """
    Set up logging based on configuration.

    Args:
        settings: Optional settings object (uses get_settings() if not provided)
    """
    if settings is None:
        from src.core.settings import get_settings

        settings = get_settings()

    log_config = settings.logging
    level = getattr(logging, log_config.level)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)

    if log_config.format == "json":
        formatter: logging.Formatter = JSONFormatter()
    else:
        formatter = TextFormatter()

    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_config.log_file:
        log_file_path = Path(log_config.log_file)
        log_file_path.parent.mkdir(parents=True, exist_ok=True)

        max_bytes = log_config.max_file_size_mb * 1024 * 1024
        file_handler = logging.handlers.RotatingFileHandler(
            log_file_path,
            maxBytes=max_bytes,
            backupCount=log_config.backup_count,
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # Reduce noise from third-party libraries
    logging.getLogger("numexpr").setLevel(logging.WARNING)

    root_logger.debug(
        "Logging configured",
        extra={
            "log_level": log_config.level,
            "log_format": log_config.format,
            "log_file": log_config.log_file,
        },
    )


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the specified name.

    Args:
        name: Logger name (typically __name__ of the module)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


class RunContextFilter(logging.Filter):
    """
    Filter that stamps a run label onto log records.

    The label identifies the configuration a CLI command is working on, so
    interleaved log lines from a parallel table run can be told apart.
    """

    def __init__(self, run_context: str):
        super().__init__()
        self.run_context = run_context

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_context = self.run_context
        return True


def add_run_context_to_logger(logger: logging.Logger, run_context: str) -> None:
    """
    Add a run context filter to a logger.

    Args:
        logger: Logger to modify
        run_context: Label added to all log records
    """
    run_filter = RunContextFilter(run_context)
    logger.addFilter(run_filter)
    # Logger filters skip records propagated from child loggers; handler filters do not.
    for handler in logger.handlers:
        handler.addFilter(run_filter)


def remove_run_context_from_logger(logger: logging.Logger) -> None:
    """Remove all RunContextFilter instances from a logger and its handlers."""
    logger.filters = [f for f in logger.filters if not isinstance(f, RunContextFilter)]
    for handler in logger.handlers:
        handler.filters = [f for f in handler.filters if not isinstance(f, RunContextFilter)]
