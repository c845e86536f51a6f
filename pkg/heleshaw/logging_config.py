"""
Logging configuration for heleshaw.

All solver modules log through a logger obtained here. The level comes
from the tool configuration (log_level / debug) once the CLI starts;
before that, and for library use, the package logs warnings and above.

HELESHAW_LOG_LEVEL and HELESHAW_LOG_FILE exist for diagnostics only: they
change how much is logged and where, never a numerical setting, so a
scenario gives the same results with or without them.

Usage:
    from .logging_config import get_logger
    logger = get_logger(__name__)

    logger.debug("Newton step %d: |F| = %.3e", k, norm)
    logger.warning("Fourier tail not resolved at n=%d", n)
"""

import logging
import os
import sys
from typing import Optional


DEFAULT_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DEFAULT_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

ROOT_LOGGER_NAME = "heleshaw"

LEVEL_NAMES = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "WARN": logging.WARNING,
    "ERROR": logging.ERROR,
}

_configured = False
_log_file_path: Optional[str] = None
_log_level = logging.WARNING


def configure_logging(
    level: int = logging.WARNING,
    log_file: Optional[str] = None,
    format_string: str = DEFAULT_FORMAT,
    date_format: str = DEFAULT_DATE_FORMAT,
) -> None:
    """
    Configure the package root logger.

    Console output goes to stderr so that the CLI can keep stdout for
    machine-readable reports.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional path of a log file written in addition to stderr
        format_string: Log record format
        date_format: Timestamp format
    """
    global _configured, _log_file_path, _log_level

    _log_level = level
    _log_file_path = log_file

    root_logger = logging.getLogger(ROOT_LOGGER_NAME)
    root_logger.setLevel(level)
    root_logger.handlers.clear()
    root_logger.propagate = False

    formatter = logging.Formatter(format_string, datefmt=date_format)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    _configured = True


def parse_level(name: str, default: int = logging.WARNING) -> int:
    """Map a level name such as "debug" to its logging constant."""
    return LEVEL_NAMES.get(name.strip().upper(), default) if name else default


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger under the heleshaw namespace.

    The first call configures logging from HELESHAW_LOG_LEVEL and
    HELESHAW_LOG_FILE unless configure_logging() ran before.

    Args:
        name: Module name (typically __name__)

    Returns:
        logging.Logger instance
    """
    if not _configured:
        level = parse_level(os.environ.get("HELESHAW_LOG_LEVEL", "WARNING"))
        configure_logging(level=level, log_file=os.environ.get("HELESHAW_LOG_FILE"))

    if not name.startswith(ROOT_LOGGER_NAME):
        name = f"{ROOT_LOGGER_NAME}.{name}"

    return logging.getLogger(name)


def set_log_level(level: int) -> None:
    """Change the level of every heleshaw logger and handler."""
    global _log_level
    _log_level = level

    root_logger = logging.getLogger(ROOT_LOGGER_NAME)
    root_logger.setLevel(level)
    for handler in root_logger.handlers:
        handler.setLevel(level)


def get_log_level() -> int:
    """Return the current package log level."""
    return _log_level


def resolve_level(configured: str, debug: bool = False, verbose: bool = False) -> int:
    """
    Level for a CLI run.

    --verbose wins, then HELESHAW_LOG_LEVEL, then debug = true, then the
    configured log_level.
    """
    if verbose:
        return logging.DEBUG
    override = os.environ.get("HELESHAW_LOG_LEVEL")
    if override:
        return parse_level(override)
    if debug:
        return logging.DEBUG
    return parse_level(configured)
