# app/core/errors.py


class NdlatError(Exception):
    """Base class for toolkit errors."""


class InvalidParamsError(NdlatError, ValueError):
    """A parametrization, range or option violates its invariants."""


class TickAlignmentError(InvalidParamsError):
    """A time value is not an integer multiple of the tick."""

    def __init__(self, flag: str, value: float, tick: float):
        self.flag = flag
        self.value = value
        self.tick = tick
        super().__init__(
            f"{flag}={value!r} is not an integer multiple of the tick ({tick!r} s)"
        )


class NumericalGuardError(NdlatError, RuntimeError):
    """An internal guard tripped (order limit, leftover mass, oversized grid)."""
