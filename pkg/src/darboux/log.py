"""Logging setup for darboux."""

import logging
import os
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from .errors import ParameterError

LOG_ENV_VAR = "DARBOUX_LOG_LEVEL"
ROOT_LOGGER = "darboux"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_logger(name: str) -> logging.Logger:
    """Return a logger in the darboux namespace."""
    if name != ROOT_LOGGER and not name.startswith(f"{ROOT_LOGGER}."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def resolve_level(level: Optional[str] = None) -> str:
    """Pick the log level from the argument, the environment, or the default."""
    chosen = (level or os.environ.get(LOG_ENV_VAR) or "WARNING").upper()
    if chosen not in LEVELS:
        raise ParameterError(f"unknown log level {chosen!r}")
    return chosen


def configure_logging(level: Optional[str] = None) -> None:
    """
    Route darboux log records to stderr through rich.

    stdout stays reserved for report payloads.

    Args:
        level: Log level name; falls back to DARBOUX_LOG_LEVEL, then WARNING
    """
    root = logging.getLogger(ROOT_LOGGER)
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(resolve_level(level))
    root.propagate = False
