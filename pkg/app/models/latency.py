# app/models/latency.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from app.core.units import to_seconds


@dataclass(frozen=True)
class LatencyResult:
    """
    Exact discovery latencies of one instance.

    Tick values are exact; None stands for an unbounded latency.
    The float properties convert to seconds using `tick`.
    """

    mean_ticks: Optional[Fraction]
    max_ticks: Optional[int]
    min_ticks: int
    orders_used: int
    coupled: bool
    tick: float = 1e-6

    @property
    def finite(self) -> bool:
        return self.mean_ticks is not None and self.max_ticks is not None

    @property
    def mean(self) -> float:
        return to_seconds(self.mean_ticks, self.tick)

    @property
    def max(self) -> float:
        return to_seconds(self.max_ticks, self.tick)

    @property
    def min(self) -> float:
        return to_seconds(self.min_ticks, self.tick)
