# app/core/units.py
import math
from fractions import Fraction

from app.core.errors import InvalidParamsError, TickAlignmentError

ALIGNMENT_TOLERANCE = 1e-9


def _exact(value: float | int | Fraction) -> Fraction:
    # str() keeps the decimal a user typed exact (10.239375 -> 81915/8000)
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


def to_ticks(value: float, tick: float, flag: str = "value") -> int:
    """
    Convert seconds to an integer number of ticks.

    The ratio value/tick is formed from the decimal forms of both numbers,
    so aligned inputs such as 10.239375 s at 1 us stay aligned. Raises
    TickAlignmentError (naming `flag`) when it is further than
    ALIGNMENT_TOLERANCE from an integer.
    """
    if not math.isfinite(tick) or tick <= 0:
        raise InvalidParamsError(f"tick must be positive, got {tick}")
    if not math.isfinite(value):
        raise InvalidParamsError(f"{flag}={value} is not a finite number of seconds")
    ratio = _exact(value) / _exact(tick)
    ticks = round(ratio)
    if abs(ratio - ticks) > ALIGNMENT_TOLERANCE:
        raise TickAlignmentError(flag, value, tick)
    return int(ticks)


def to_seconds(ticks: int | Fraction | None, tick: float) -> float:
    if ticks is None:
        return float("inf")
    return float(ticks * _exact(tick))
