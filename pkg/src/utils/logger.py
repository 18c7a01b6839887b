"""
Logging Configuration Module

Structured JSON events on stderr and in a rotating log file. Numerical payloads
(complex numbers, numpy scalars and arrays) are converted to plain JSON values before
rendering, complex values as [re, im] pairs.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Optional

import numpy as np
import structlog
from structlog.typing import EventDict, WrappedLogger

from .config import get_config

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"
MAX_LOG_BYTES = 10 * 1024 * 1024


def to_jsonable(value: Any) -> Any:
    """Plain JSON form of numbers, arrays and containers of them."""
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def jsonable_values(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    return {key: to_jsonable(value) for key, value in event_dict.items()}


def setup_logging(
    name: str = "abeltrace",
    log_level: Optional[str] = None,
    log_file: Optional[Path] = None,
) -> "structlog.BoundLogger":
    """
    Route structured events to stderr and a rotating file.

    Stdout is left to command reports.

    Args:
        name: Logger name, also the default log file stem
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file. If None, uses the configured logs directory

    Returns:
        Configured structlog logger
    """
    config = get_config()
    log_level = log_level or config.log_level
    level = getattr(logging, log_level.upper(), logging.INFO)
    if log_file is None:
        log_file = config.logs_dir / f"{name}.log"

    root_logger = logging.getLogger()
    root_logger.handlers = []
    root_logger.setLevel(level)

    formatter = logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    handlers = [
        logging.StreamHandler(sys.stderr),
        RotatingFileHandler(log_file, maxBytes=MAX_LOG_BYTES, backupCount=5),
    ]
    for handler in handlers:
        handler.setLevel(level)
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.format_exc_info,
            jsonable_values,
            structlog.processors.JSONRenderer(sort_keys=True),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logger = structlog.get_logger(name)
    logger.debug("logging_initialized", log_level=log_level, log_file=str(log_file))
    return logger


def get_logger(name: str = "abeltrace") -> "structlog.BoundLogger":
    """Logger for a module; events are rendered once :func:`setup_logging` has run."""
    return structlog.get_logger(name)
