# app/models/gamma.py
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional


class Mode(str, Enum):
    SHRINKING = "s"
    GROWING = "g"
    COUPLING = "c"

    def flipped(self) -> "Mode":
        if self is Mode.GROWING:
            return Mode.SHRINKING
        if self is Mode.SHRINKING:
            return Mode.GROWING
        return self


class Termination(str, Enum):
    WINDOW_REACHED = "window_reached"
    COUPLED = "coupled"
    ORDER_LIMIT = "order_limit"


@dataclass(frozen=True, slots=True)
class GammaStage:
    """
    One order of the gamma recursion.

    sigma is the advertiser time (a multiple of Ta) it takes the
    packet-to-window offset to move by gamma; sigma_s and d_t feed the
    next order. q is the multiplier that produced this stage (None at n = 0).
    """

    order: int
    gamma: int
    mode: Mode
    sigma: int
    sigma_s: int
    d_t: int
    q: Optional[int] = None

    def is_terminal(self, ds_eff: int) -> bool:
        return self.mode is Mode.COUPLING or self.gamma <= ds_eff


@dataclass
class GammaSchedule:
    stages: List[GammaStage] = field(default_factory=list)
    termination: Termination = Termination.WINDOW_REACHED
    max_order: int = 0

    @property
    def order(self) -> int:
        return len(self.stages) - 1

    @property
    def coupled(self) -> bool:
        return self.termination is Termination.COUPLED
