"""Logging for h2gov: one rotating run log shared by every module logger."""

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from appdirs import user_log_dir

LOG_ENV_VAR = "H2GOV_LOG_DIR"
LOG_FILE_NAME = "h2gov.log"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_MAX_BYTES = 1 * 1024 * 1024
LOG_BACKUPS = 5

# Module loggers live under src.* and runtime.*; the CLI retunes only these
PACKAGE_PREFIXES = ("src.", "runtime.")


def resolve_log_dir(log_dir: Optional[Path] = None) -> Path:
    """Pick the log directory and make sure it exists.

    The explicit argument wins, then ``H2GOV_LOG_DIR``, then ``logs`` in the
    project root. Installed copies whose project root is read-only fall back
    to the per-user log directory.

    Returns:
        Path: Existing, writable log directory.
    """
    if log_dir is None:
        env_log_dir = os.getenv(LOG_ENV_VAR)
        log_dir = Path(env_log_dir) if env_log_dir else Path(__file__).parents[2] / "logs"

    try:
        log_dir.mkdir(parents=True, exist_ok=True)
    except OSError:
        log_dir = Path(user_log_dir("H2Gov"))
        log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir


def _handlers(log_dir: Path) -> list[logging.Handler]:
    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.ERROR)

    file_handler = RotatingFileHandler(
        log_dir / LOG_FILE_NAME, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUPS
    )
    file_handler.setLevel(logging.DEBUG)

    for handler in (console_handler, file_handler):
        handler.setFormatter(formatter)
    return [console_handler, file_handler]


def get_logger(name: str, log_dir: Optional[Path] = None) -> logging.Logger:
    """Module logger writing errors to the console and everything to the run log.

    Handlers are attached on the first call only.

    Args:
        name (str): Logger name, normally the module's ``__name__``.
        log_dir (Path, optional): Overrides the resolved log directory.

    Returns:
        logging.Logger: Configured logger instance.
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(logging.DEBUG)
    for handler in _handlers(resolve_log_dir(log_dir)):
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def _package_loggers() -> list[logging.Logger]:
    return [
        existing
        for name, existing in logging.Logger.manager.loggerDict.items()
        if name.startswith(PACKAGE_PREFIXES) and isinstance(existing, logging.Logger)
    ]


def configure_logging(level=logging.INFO, console_level: Optional[int] = None) -> None:
    """Set the application level and, optionally, the console verbosity.

    Args:
        level (int): Level of the ``h2gov`` logger.
        console_level (int, optional): New level for the console handlers of
            already created module loggers, e.g. INFO for ``--verbose``.
            File handlers keep logging at DEBUG.
    """
    logging.getLogger("h2gov").setLevel(level)

    if console_level is None:
        return

    for logger in _package_loggers():
        for handler in logger.handlers:
            if not isinstance(handler, logging.FileHandler):
                handler.setLevel(console_level)
