"""
Utility functions for the minorforge package.
"""

import os
import re
from importlib import metadata
from typing import Optional

from .errors import InvalidParameterError
from .models import Defaults


def parse_number_list(text: str) -> list[float]:
    """Parse a comma-separated list of numbers.

    "2,3,4" -> [2.0, 3.0, 4.0]; blanks between commas are ignored.
    """
    values: list[float] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(float(part))
        except ValueError as exc:
            raise InvalidParameterError(f"not a number: {part!r}") from exc
    if not values:
        raise InvalidParameterError(f"no numbers in {text!r}")
    return values


def resolve_seed(cli_seed: Optional[int]) -> int:
    """Master seed: MINORFORGE_SEED wins over the flag, then the default."""
    env_value = os.getenv(Defaults.SEED_ENV)
    if env_value is not None and env_value.strip():
        try:
            return int(env_value.strip(), 0)
        except ValueError as exc:
            raise InvalidParameterError(
                f"{Defaults.SEED_ENV}={env_value!r} is not an integer"
            ) from exc
    return Defaults.SEED if cli_seed is None else cli_seed


def slugify(text: str) -> str:
    """Keep letters, digits, dots and dashes; everything else becomes '_'."""
    cleaned = re.sub(r"[^A-Za-z0-9.\-]+", "_", text).strip("._")
    return cleaned if cleaned else "unnamed"


def format_seconds(seconds: float) -> str:
    """Human-readable duration (ms, s or min)."""
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    if seconds < 120:
        return f"{seconds:.2f} s"
    return f"{seconds / 60:.1f} min"


def software_version() -> str:
    """Installed package version, or 0.0.0 when running from a checkout."""
    try:
        return metadata.version("minorforge")
    except metadata.PackageNotFoundError:
        return "0.0.0"
