"""
utils/logger.py
Logging configuration for GradePipe
"""

import logging
import os
import sys
import time
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

from dotenv import load_dotenv

from config.settings import LOG_LEVEL_ENV_VAR


# Log format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Default log level
DEFAULT_LEVEL = logging.INFO

ROOT_LOGGER_NAME = "gradepipe"


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time"""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def resolve_level(level: Optional[Union[int, str]] = None) -> int:
    """
    Resolve a logging level from an int, a level name, or the environment

    Args:
        level: Explicit level; falls back to GRADEPIPE_LOG_LEVEL (a .env file is
            loaded first), then INFO

    Returns:
        Numeric logging level
    """
    if level is None:
        load_dotenv(override=False)
        level = os.environ.get(LOG_LEVEL_ENV_VAR, DEFAULT_LEVEL)

    if isinstance(level, str):
        numeric = logging.getLevelName(level.strip().upper())
        return numeric if isinstance(numeric, int) else DEFAULT_LEVEL

    return int(level)


def setup_logger(
    name: str = ROOT_LOGGER_NAME,
    level: Optional[Union[int, str]] = None,
    log_file: Optional[Path] = None,
) -> logging.Logger:
    """
    Setup and configure application logger

    Console output goes to stderr; stdout carries CSV and other data.

    Args:
        name: Logger name (default: "gradepipe")
        level: Logging level (default: env GRADEPIPE_LOG_LEVEL or INFO)
        log_file: Optional rotating log file

    Returns:
        Configured logger instance
    """
    level = resolve_level(level)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid adding handlers multiple times
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)

    console_handler = _StderrHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        # File handler (rotating, max 10MB, keep 5 backups)
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False

    logger.debug(f"GradePipe logger initialized - {datetime.now().strftime(DATE_FORMAT)}")
    logger.debug(f"Log level: {logging.getLevelName(level)}")
    if log_file is not None:
        logger.debug(f"Log file: {log_file}")

    return logger


def get_logger(name: str = None) -> logging.Logger:
    """
    Get a logger instance for a module

    Args:
        name: Module name (typically __name__)

    Returns:
        Logger instance

    Example:
        logger = get_logger(__name__)
        logger.info("Module initialized")
    """
    if name:
        return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")
    return logging.getLogger(ROOT_LOGGER_NAME)


class LogExecutionTime:
    """
    Time a pipeline stage; logs at info on success, error on failure

    Example:
        with LogExecutionTime(logger, "feature extraction") as timer:
            extractor.extract_many(paths)
        timer.elapsed  # seconds
    """

    def __init__(self, logger: logging.Logger, stage: str):
        self.logger = logger
        self.stage = stage
        self.elapsed = 0.0
        self._started = 0.0

    def __enter__(self):
        self._started = time.perf_counter()
        self.logger.debug(f"{self.stage}: started")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = time.perf_counter() - self._started
        if exc_type is None:
            self.logger.info(f"{self.stage}: done in {self.elapsed:.2f}s")
        else:
            self.logger.error(f"{self.stage}: {exc_type.__name__} after {self.elapsed:.2f}s")
        return False


__all__ = [
    'setup_logger',
    'get_logger',
    'resolve_level',
    'LogExecutionTime',
]
