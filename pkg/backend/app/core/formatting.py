"""
backend/app/core/formatting.py

Deterministic Number Formatting

Shared helpers for every emitted artifact (CSV, JSON, API payloads):
- fixed 6-significant-digit floats
- humanized qubit counts ("62 kq", "3.1 Mq")
- humanized durations ("3.6 min", "2.5 days")
"""

import math
from typing import Any

SIGNIFICANT_DIGITS = 6

SECONDS_PER_MINUTE = 60.0
SECONDS_PER_HOUR = 3600.0
SECONDS_PER_DAY = 86400.0
SECONDS_PER_YEAR = 365.25 * SECONDS_PER_DAY
SECONDS_PER_MONTH = SECONDS_PER_YEAR / 12


def format_float(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Formats a float with a fixed number of significant digits."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def round_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Rounds to significant digits; used before JSON emission."""
    if value == 0 or not math.isfinite(value):
        return value
    return float(format_float(value, digits))


def normalize(value: Any) -> Any:
    """Recursively rounds floats so serialized output is stable."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return round_sig(value)
    if isinstance(value, dict):
        return {key: normalize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(item) for item in value]
    return value


def _scaled(value: float) -> str:
    if value < 10:
        return f"{value:.1f}"
    return f"{round(value):d}"


def humanize_qubits(count: float) -> str:
    """62154 -> '62 kq', 7100 -> '7.1 kq', 3_100_000 -> '3.1 Mq'."""
    if count >= 1e6:
        return f"{_scaled(count / 1e6)} Mq"
    if count >= 1e3:
        return f"{_scaled(count / 1e3)} kq"
    return f"{round(count):d} q"


def humanize_seconds(seconds: float) -> str:
    """Picks the largest unit that keeps the value at or above one."""
    if not math.isfinite(seconds):
        return "inf"
    units = (
        (SECONDS_PER_YEAR, "years"),
        (SECONDS_PER_MONTH, "months"),
        (SECONDS_PER_DAY, "days"),
        (SECONDS_PER_HOUR, "hours"),
        (SECONDS_PER_MINUTE, "min"),
    )
    for size, label in units:
        if seconds >= size:
            return f"{_scaled(seconds / size)} {label}"
    if seconds >= 1:
        return f"{_scaled(seconds)} s"
    return f"{format_float(seconds, 2)} s"
