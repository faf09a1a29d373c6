"""Package logger for the engine: every module logs through ``logging.getLogger(__name__)``.

Reports own stdout, so both handlers stay off it: ``stream`` writes to stderr, ``file`` appends to
a timestamped file under ``logs/``.

>>> setup_logger

"""

import logging
import os
import sys
from datetime import datetime
from enum import IntEnum, StrEnum
from typing import Callable, Dict

LOG_FORMAT = "%(asctime)s - %(levelname)s - [%(name)s:%(lineno)d] - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class LogHandler(StrEnum):
    """Where engine logs go, read from ``CARTIER_LOG_HANDLER``.

    >>> LogHandler

    """

    file = "file"
    stream = "stream"


class LogLevel(IntEnum):
    """Verbosity of the engine, read from ``CARTIER_LOG_LEVEL`` by name in any case.

    >>> LogLevel

    """

    debug = logging.DEBUG
    info = logging.INFO
    warning = logging.WARNING
    error = logging.ERROR

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            return cls.__members__.get(value.strip().lower())
        return None


def _to_stderr() -> logging.Handler:
    return logging.StreamHandler(stream=sys.stderr)


def _to_file() -> logging.Handler:
    os.makedirs("logs", exist_ok=True)
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return logging.FileHandler(os.path.join("logs", f"pycartier_{stamp}.log"), mode="a")


HANDLERS: Dict[LogHandler, Callable[[], logging.Handler]] = {
    LogHandler.stream: _to_stderr,
    LogHandler.file: _to_file,
}


def setup_logger(handler: LogHandler, level: LogLevel) -> logging.Logger:
    """Points the ``pycartier`` logger at a single fresh handler.

    Args:
        handler: Destination of the records.
        level: Lowest level that gets through.

    Returns:
        logging.Logger:
        The package logger, whose children are the module loggers.
    """
    logger = logging.getLogger(__package__)
    for existing in list(logger.handlers):
        logger.removeHandler(existing)
        existing.close()
    target = HANDLERS[LogHandler(handler)]()
    target.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(target)
    logger.setLevel(level)
    return logger
