# app/models/analysis.py
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.errors import InvalidParamsError
from app.core.units import to_seconds


class EnergyParams(BaseModel):
    """Energy per advertising packet (e_a) and per scan window (e_s), joules."""

    model_config = ConfigDict(frozen=True)

    e_a: float = Field(default=1.0, ge=0)
    e_s: float = Field(default=1.0, ge=0)


@dataclass(frozen=True)
class EnergyMetrics:
    e_nd_a: float
    e_nd_s: float
    latency_dc_product: float

    @property
    def e_nd_joint(self) -> float:
        return self.e_nd_a + self.e_nd_s


@dataclass(frozen=True)
class ErrorMetrics:
    rmse: float
    nrmse: Optional[float]  # None when the simulated series is constant
    max_dev: float
    n_points: int
    n_excluded: int = 0


class Objective(str, Enum):
    MEAN_LATENCY = "mean_latency"
    MAX_LATENCY = "max_latency"
    ENERGY_ADV = "energy_adv"
    ENERGY_SCAN = "energy_scan"
    ENERGY_JOINT = "energy_joint"
    LATENCY_DC_PRODUCT = "latency_dc_product"
    MAX_ENERGY_ADV = "max_energy_adv"
    MAX_ENERGY_SCAN = "max_energy_scan"
    MAX_ENERGY_JOINT = "max_energy_joint"
    POWER_LATENCY_PRODUCT = "power_latency_product"

    @classmethod
    def parse(cls, name: str) -> "Objective":
        try:
            return cls(name)
        except ValueError:
            choices = ", ".join(o.value for o in cls)
            raise InvalidParamsError(f"unknown objective {name!r} (choose from {choices})") from None


@dataclass(frozen=True)
class Range:
    """Inclusive tick range start, start + step, ... <= stop."""

    start: int
    stop: int
    step: int

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise InvalidParamsError(f"range step must be positive, got {self.step}")
        if self.stop < self.start:
            raise InvalidParamsError(f"range stop {self.stop} is below start {self.start}")
        if self.start < 1:
            raise InvalidParamsError(f"range start must be at least one tick, got {self.start}")

    def values(self) -> List[int]:
        return list(range(self.start, self.stop + 1, self.step))

    def __len__(self) -> int:
        return (self.stop - self.start) // self.step + 1


@dataclass(frozen=True)
class SweepRow:
    """One evaluated parametrization. Times in ticks; None marks an infinite latency."""

    ta: int
    ts: int
    ds: int
    da: int
    mean_ticks: Optional[Fraction]
    max_ticks: Optional[int]
    order: int
    objective: float
    tick: float = 1e-6

    @property
    def duty_cycle_adv(self) -> float:
        return self.da / self.ta

    @property
    def mean(self) -> float:
        return to_seconds(self.mean_ticks, self.tick)

    @property
    def max(self) -> float:
        return to_seconds(self.max_ticks, self.tick)
