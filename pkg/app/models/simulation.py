# app/models/simulation.py
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from app.core.units import to_seconds


@dataclass(frozen=True)
class OffsetState:
    """
    Start of a rendezvous: the first advertising packet at t_a0.

    phi is where the packet end sits inside the scan interval, i.e.
    (t_a0 + da) mod Ts; a packet is received when phi falls into
    [Ts - ds_eff, Ts].
    """

    t_a0: Fraction
    phi: Fraction


@dataclass(frozen=True)
class SimSummary:
    mean_ticks: Optional[Fraction]
    max_ticks: Optional[int]
    aborted: int
    n_runs: int
    std_error_ticks: float = 0.0
    tick: float = 1e-6

    @property
    def completed(self) -> int:
        return self.n_runs - self.aborted

    @property
    def mean(self) -> float:
        if self.mean_ticks is None:
            return math.nan
        return to_seconds(self.mean_ticks, self.tick)

    @property
    def max(self) -> float:
        if self.max_ticks is None:
            return math.nan
        return to_seconds(self.max_ticks, self.tick)
