"""Engine defaults read from the environment, optionally through a dotenv file.

>>> Settings

"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Type, TypeVar

from pycartier.exceptions import ConfigError
from pycartier.logger import LogHandler, LogLevel
from pycartier.utils import getenv, load_env

Choice = TypeVar("Choice", bound=Enum)


@dataclass(frozen=True)
class Settings:
    """Caps and knobs shared by the fixed point engine.

    ``e_cap`` is where a twisted ``C+`` first tries to certify itself; the degree keeps rising past it
    until the certificate holds or ``e_ceiling`` is reached.

    >>> Settings

    """

    e_cap: int = 4
    e_ceiling: int = 10
    word_limit: int = 256
    max_iterations: int = 64
    max_workers: int = 1
    log_level: LogLevel = LogLevel.warning
    log_handler: LogHandler = LogHandler.stream


DEFAULT_SETTINGS = Settings()


def _positive(name: str, default: int) -> int:
    value = getenv(name, default=str(default))
    try:
        number = int(value)
    except ValueError:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}") from None
    if number < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return number


def _choice(name: str, kind: Type[Choice], default: str) -> Choice:
    value = getenv(name, default=default)
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{name} must be one of {', '.join(m.name for m in kind)}, got {value!r}") from None


def load_settings(env_file: str = None, logger: logging.Logger = None) -> Settings:
    """Loads the dotenv file and collects ``CARTIER_*`` variables into ``Settings``.

    Args:
        env_file: Dotenv filepath, falls back to ``ENV_FILE`` and then ``.env``.
        logger: Logger used while loading.

    Returns:
        Settings:
        Settings with environment values applied over the defaults.

    Raises:
        ConfigError:
        When a variable is not a positive integer or names an unknown log level or handler.
    """
    logger = logger or logging.getLogger(__name__)
    load_env(env_file or getenv("ENV_FILE", default=".env"), logger)
    return Settings(
        e_cap=_positive("CARTIER_E_CAP", DEFAULT_SETTINGS.e_cap),
        e_ceiling=_positive("CARTIER_E_CEILING", DEFAULT_SETTINGS.e_ceiling),
        word_limit=_positive("CARTIER_WORD_LIMIT", DEFAULT_SETTINGS.word_limit),
        max_iterations=_positive("CARTIER_MAX_ITERATIONS", DEFAULT_SETTINGS.max_iterations),
        max_workers=_positive("CARTIER_MAX_WORKERS", DEFAULT_SETTINGS.max_workers),
        log_level=_choice("CARTIER_LOG_LEVEL", LogLevel, DEFAULT_SETTINGS.log_level.name),
        log_handler=_choice("CARTIER_LOG_HANDLER", LogHandler, DEFAULT_SETTINGS.log_handler.value),
    )
