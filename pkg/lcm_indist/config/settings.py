"""
Configuration settings for lcm_indist
Every tunable can be overridden from the environment or a .env file
"""
import logging
import os
from pathlib import Path
from typing import Callable, TypeVar

from dotenv import load_dotenv

from ..errors import ConfigurationError

load_dotenv()

T = TypeVar("T")


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError as e:
        raise ConfigurationError(f"{name}={raw!r} is not valid: {e}") from e


def _int(raw: str) -> int:
    # accepts hex seeds such as 0xC0FFEE
    return int(raw, 0)


def parse_log_level(raw: str) -> str:
    level = raw.strip().upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigurationError(f"unknown logging level {raw!r}")
    return level


# Paths
PROJECT_ROOT = Path(__file__).parent.parent.parent
SAMPLE_DATA_DIR = PROJECT_ROOT / "sample_data"

# Search bounds
SEARCH_BOUND = _env("LCM_SEARCH_BOUND", 10, _int)
EXHAUSTIVE_BOUND = _env("LCM_EXHAUSTIVE_BOUND", 8, _int)
CHARPOLY_MAX_N = _env("LCM_CHARPOLY_MAX_N", 8, _int)

# Reproducibility
RANDOM_SEED = _env("LCM_RANDOM_SEED", 0xC0FFEE, _int)

# Numeric validation
NUMERIC_MAX_N = _env("LCM_NUMERIC_MAX_N", 6, _int)
NUMERIC_DRAWS = _env("LCM_NUMERIC_DRAWS", 5, _int)
NUMERIC_DT = _env("LCM_NUMERIC_DT", 1e-3, float)
NUMERIC_T_MAX = _env("LCM_NUMERIC_T_MAX", 10.0, float)
TRANSFER_TOLERANCE = _env("LCM_TRANSFER_TOLERANCE", 1e-8, float)
RATE_LOW = _env("LCM_RATE_LOW", 0.5, float)
RATE_HIGH = _env("LCM_RATE_HIGH", 1.5, float)

# Logging
LOG_LEVEL = _env("LCM_LOG_LEVEL", "WARNING", parse_log_level)
