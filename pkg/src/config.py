"""
Runtime settings read from the environment and an optional ``.env`` file.
"""
import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .core.constants import (
    DEFAULT_CHART_DEGREE, DEFAULT_LOG_LEVEL, DEFAULT_ORDER, DEFAULT_SEED,
    DEFAULT_WORKERS
)

logger = logging.getLogger(__name__)

ENV_PREFIX = "DEFORMAE_"

def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise ValueError(f"{ENV_PREFIX}{name} must be at least {minimum}")
    return value

@dataclass(frozen=True)
class Settings:
    """Defaults the command line falls back to."""
    order: int = DEFAULT_ORDER
    chart_degree: int = DEFAULT_CHART_DEGREE
    workers: int = DEFAULT_WORKERS
    log_level: str = DEFAULT_LOG_LEVEL
    seed: int = DEFAULT_SEED

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Settings":
        """Build settings after loading ``.env`` (existing variables win)."""
        load_dotenv(dotenv_path)
        level = os.getenv(ENV_PREFIX + "LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"{ENV_PREFIX}LOG_LEVEL {level!r} is not a logging level")
        return cls(
            order=_int_env("ORDER", DEFAULT_ORDER, minimum=1),
            chart_degree=_int_env("CHART_DEGREE", DEFAULT_CHART_DEGREE, minimum=1),
            workers=_int_env("WORKERS", DEFAULT_WORKERS, minimum=1),
            log_level=level,
            seed=_int_env("SEED", DEFAULT_SEED),
        )
