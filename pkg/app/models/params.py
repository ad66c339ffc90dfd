# app/models/params.py
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.units import to_ticks


class ProtocolParams(BaseModel):
    """
    One discovery problem instance, all values in integer ticks.

    ta: advertising interval
    ts: scan interval
    ds: scan window (1 <= ds <= ts)
    da: packet duration (0 <= da < ds)
    """

    model_config = ConfigDict(frozen=True)

    ta: int = Field(ge=1)
    ts: int = Field(ge=1)
    ds: int = Field(ge=1)
    da: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_windows(self) -> "ProtocolParams":
        if self.ds > self.ts:
            raise ValueError(f"scan window ds={self.ds} exceeds scan interval ts={self.ts}")
        if self.da >= self.ds:
            raise ValueError(
                f"packet duration da={self.da} must be shorter than the scan window ds={self.ds}"
            )
        return self

    @classmethod
    def from_seconds(
        cls,
        ta: float,
        ts: float,
        ds: float,
        da: float = 0.0,
        *,
        tick: float = 1e-6,
    ) -> "ProtocolParams":
        return cls(
            ta=to_ticks(ta, tick, "--ta"),
            ts=to_ticks(ts, tick, "--ts"),
            ds=to_ticks(ds, tick, "--ds"),
            da=to_ticks(da, tick, "--da"),
        )

    def effective(self) -> "EffectiveParams":
        return EffectiveParams(ta=self.ta, ts=self.ts, ds_eff=self.ds - self.da, da=self.da)

    @property
    def duty_cycle_adv(self) -> float:
        return self.da / self.ta


class EffectiveParams(BaseModel):
    """Parameters with the scan window shortened by the packet duration."""

    model_config = ConfigDict(frozen=True)

    ta: int = Field(ge=1)
    ts: int = Field(ge=1)
    ds_eff: int = Field(ge=1)
    da: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_window(self) -> "EffectiveParams":
        if self.ds_eff > self.ts:
            raise ValueError(f"effective window {self.ds_eff} exceeds scan interval ts={self.ts}")
        return self
