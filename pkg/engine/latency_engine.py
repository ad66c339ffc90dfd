# engine/latency_engine.py
"""
Exact mean and worst-case discovery latency.

The not-yet-discovered offset mass lives in a ProbabilityBuffer over the
model coordinate x = (t_a0 + da) mod Ts, where a packet is received once x
reaches the window [Ts - ds_eff, Ts]. Every gamma stage moves each point by
gamma per sigma of advertiser time (right for growing, left for shrinking
stages, where the left window is [-ds_eff, 0]). Points that land in the
window are absorbed and charged their penalty; points that jump over it are
handed to the next stage. The stage with gamma <= ds_eff absorbs everything.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from app.core.errors import InvalidParamsError, NumericalGuardError
from app.models.gamma import GammaSchedule, GammaStage, Mode, Termination
from app.models.latency import LatencyResult
from app.models.params import EffectiveParams, ProtocolParams
from engine.gamma_sequence import build_schedule
from engine.prob_buffer import Number, ProbabilityBuffer, Segment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SegmentSplit:
    """
    Cell layout of one segment under a stage.

    n_l / n_u are the smallest / largest step counts with a complete cell
    boundary inside the segment; d_nl and d_nu are the lengths of the two
    partial cells at the ends and d_f is the full length. n_u < n_l means
    the whole segment sits inside cell n_l.
    """

    n_l: int
    n_u: int
    d_nl: Number
    d_f: Number
    d_nu: Number

    @property
    def full_cells(self) -> int:
        return max(self.n_u - self.n_l, 0)

    @property
    def step_sum(self) -> int:
        """Sum of the step counts n_l + 1 .. n_u of the full cells."""
        return self.full_cells * (self.n_u + self.n_l + 1) // 2


@dataclass
class IterationOutcome:
    partial_mean: Fraction  # ticks, already weighted by probability
    next_buffer: ProbabilityBuffer
    max_penalty: Optional[int]  # None when no mass was absorbed
    absorbed_mass: Fraction = Fraction(0)


# (steps of this cell, local start, local end, number of cells, sum of their steps)
_Piece = Tuple[int, Number, Number, int, int]


def _ceil_div(a: Number, b: int) -> int:
    if isinstance(a, int):
        return -(-a // b)
    return math.ceil(a / b)


def _floor_div(a: Number, b: int) -> int:
    if isinstance(a, int):
        return a // b
    return math.floor(a / b)


def split_segment(segment: Segment, stage: GammaStage, params: EffectiveParams) -> SegmentSplit:
    l, r = segment.t_s, segment.t_e
    gamma = stage.gamma
    if stage.mode is Mode.GROWING:
        edge = params.ts - params.ds_eff
        n_l = _ceil_div(edge - r, gamma)
        n_u = _floor_div(edge - l, gamma)
        d_nu = (edge - n_u * gamma) - l
        d_nl = r - (edge - n_l * gamma)
    elif stage.mode is Mode.SHRINKING:
        n_l = _ceil_div(l, gamma)
        n_u = _floor_div(r, gamma)
        d_nl = n_l * gamma - l
        d_nu = r - n_u * gamma
    else:
        raise ValueError("a coupling stage has no cell layout")
    return SegmentSplit(n_l=n_l, n_u=n_u, d_nl=d_nl, d_f=r - l, d_nu=d_nu)


def _pieces(segment: Segment, split: SegmentSplit, stage: GammaStage, params: EffectiveParams) -> List[_Piece]:
    """Express the segment in cell-local coordinates u in [0, gamma]."""
    gamma = stage.gamma
    growing = stage.mode is Mode.GROWING
    n_l, n_u = split.n_l, split.n_u

    if n_u < n_l:
        if growing:
            origin = params.ts - params.ds_eff - n_l * gamma
        else:
            origin = (n_l - 1) * gamma
        return [(n_l, segment.t_s - origin, segment.t_e - origin, 1, n_l)]

    pieces: List[_Piece] = []
    if growing:
        # left end belongs to cell n_u + 1, right end to cell n_l
        if split.d_nu > 0:
            pieces.append((n_u + 1, gamma - split.d_nu, gamma, 1, n_u + 1))
        if split.d_nl > 0:
            pieces.append((n_l, 0, split.d_nl, 1, n_l))
    else:
        if split.d_nl > 0:
            pieces.append((n_l, gamma - split.d_nl, gamma, 1, n_l))
        if split.d_nu > 0:
            pieces.append((n_u + 1, 0, split.d_nu, 1, n_u + 1))
    if n_u > n_l:
        pieces.append((n_u, 0, gamma, split.full_cells, split.step_sum))
    return pieces


def _advance(
    buffer: ProbabilityBuffer,
    stage: GammaStage,
    next_mode: Optional[Mode],
    params: EffectiveParams,
) -> Tuple[Number, ProbabilityBuffer, Optional[int], Number]:
    """One stage over the whole buffer; partial mean and absorbed mass are in buffer units."""
    gamma, sigma = stage.gamma, stage.sigma
    ds, ts = params.ds_eff, params.ts
    growing = stage.mode is Mode.GROWING
    terminal = stage.is_terminal(ds)

    if growing:
        hit_lo, hit_hi = 0, min(ds, gamma)
        miss_lo, miss_hi = ds, gamma
    else:
        hit_lo, hit_hi = max(gamma - ds, 0), gamma
        miss_lo, miss_hi = 0, gamma - ds

    # where a missed point restarts and whether it is charged the last step
    if growing and next_mode is Mode.SHRINKING:
        shift, full_step = -ds, True
    elif growing:
        shift, full_step = ts - ds - gamma, False
    elif next_mode is Mode.GROWING:
        shift, full_step = ts - gamma, True
    else:
        shift, full_step = 0, False

    partial: Number = 0
    absorbed: Number = 0
    worst: Optional[int] = None
    out = ProbabilityBuffer(unit=buffer.unit)

    for seg in buffer:
        split = split_segment(seg, stage, params)
        for steps, u0, u1, count, step_sum in _pieces(seg, split, stage, params):
            hit = min(u1, hit_hi) - max(u0, hit_lo)
            if hit > 0:
                partial += seg.p * sigma * hit * step_sum
                absorbed += seg.p * hit * count
                reach = seg.zeta + steps * sigma
                if worst is None or reach > worst:
                    worst = reach
            if terminal:
                continue
            lo, hi = max(u0, miss_lo), min(u1, miss_hi)
            if hi <= lo:
                continue
            if full_step:
                partial += seg.p * sigma * (hi - lo) * step_sum
                carried = steps
            else:
                partial += seg.p * sigma * (hi - lo) * (step_sum - count)
                carried = steps - 1
            out.add(lo + shift, hi + shift, seg.p * count, seg.zeta + carried * sigma)

    return partial, out, worst, absorbed


def initialize(params: EffectiveParams) -> Tuple[Fraction, ProbabilityBuffer]:
    """Offsets outside the window, uniform with density 1/Ts; the rest is discovered at once."""
    buffer = ProbabilityBuffer.single(0, params.ts - params.ds_eff, 1, 0, unit=Fraction(1, params.ts))
    return Fraction(0), buffer


def grow_to_right(
    buffer: ProbabilityBuffer,
    stage: GammaStage,
    next_mode: Optional[Mode],
    params: EffectiveParams,
) -> IterationOutcome:
    if stage.mode is not Mode.GROWING:
        raise ValueError(f"grow_to_right needs a growing stage, got mode {stage.mode.value}")
    partial, out, worst, absorbed = _advance(buffer, stage, next_mode, params)
    return IterationOutcome(
        partial_mean=buffer.unit * partial,
        next_buffer=out,
        max_penalty=worst,
        absorbed_mass=buffer.unit * absorbed,
    )


def shrink_to_left(
    buffer: ProbabilityBuffer,
    stage: GammaStage,
    next_mode: Optional[Mode],
    params: EffectiveParams,
) -> IterationOutcome:
    if stage.mode is not Mode.SHRINKING:
        raise ValueError(f"shrink_to_left needs a shrinking stage, got mode {stage.mode.value}")
    partial, out, worst, absorbed = _advance(buffer, stage, next_mode, params)
    return IterationOutcome(
        partial_mean=buffer.unit * partial,
        next_buffer=out,
        max_penalty=worst,
        absorbed_mass=buffer.unit * absorbed,
    )


def _schedule_for(params: ProtocolParams, order_limit: Optional[int]) -> Tuple[EffectiveParams, GammaSchedule]:
    eff = params.effective()
    schedule = build_schedule(eff, order_limit)
    if schedule.termination is Termination.ORDER_LIMIT:
        raise NumericalGuardError(
            f"gamma recursion exceeded order {schedule.order} for ta={params.ta} ts={params.ts} ds={params.ds}"
        )
    return eff, schedule


def compute_latency(
    params: ProtocolParams,
    *,
    tick: float = 1e-6,
    trace: Optional[List[str]] = None,
    order_limit: Optional[int] = None,
) -> LatencyResult:
    """
    Mean and maximum discovery latency of one instance.

    If `trace` is a list, one tab-separated line per stage is appended:
    order, gamma, mode, sigma, buffer mass before the stage, partial mean.
    """
    eff, schedule = _schedule_for(params, order_limit)
    stages = schedule.stages

    _, buffer = initialize(eff)
    raw_mean: Number = 0
    worst = 0  # the window itself is hit without delay
    orders_used = 0

    for idx, stage in enumerate(stages):
        if buffer.is_empty:
            break
        if stage.mode is Mode.COUPLING:
            logger.debug("coupling at order %d with mass %s left", stage.order, buffer.total_mass())
            return LatencyResult(
                mean_ticks=None,
                max_ticks=None,
                min_ticks=params.da,
                orders_used=stage.order,
                coupled=True,
                tick=tick,
            )
        next_mode = stages[idx + 1].mode if idx + 1 < len(stages) else None
        mass_before = buffer.raw_mass()
        partial, buffer, reach, absorbed = _advance(buffer, stage, next_mode, eff)
        logger.debug("order %d absorbed mass %s", stage.order, buffer.unit * absorbed)
        raw_mean += partial
        if reach is not None and reach > worst:
            worst = reach
        orders_used = stage.order
        if trace is not None:
            trace.append(
                f"{stage.order}\t{stage.gamma}\t{stage.mode.value}\t{stage.sigma}"
                f"\t{buffer.unit * mass_before}\t{buffer.unit * partial}"
            )

    if not buffer.is_empty:
        raise NumericalGuardError(
            f"mass {buffer.total_mass()} left after the last stage for ta={params.ta} ts={params.ts} ds={params.ds}"
        )

    return LatencyResult(
        mean_ticks=Fraction(raw_mean, eff.ts) + params.da,
        max_ticks=worst + params.da,
        min_ticks=params.da,
        orders_used=orders_used,
        coupled=schedule.coupled,
        tick=tick,
    )


def closed_form_ta_le_ds(params: ProtocolParams, phi0: Number) -> Number:
    """
    Latency from a first packet starting phi0 into the scan interval when
    Ta <= ds_eff (every window is reached without skipping).
    """
    eff = params.effective()
    if params.ta > eff.ds_eff:
        raise InvalidParamsError(f"closed form needs ta <= ds_eff, got ta={params.ta} ds_eff={eff.ds_eff}")
    if not 0 <= phi0 < params.ts:
        raise InvalidParamsError(f"offset {phi0} outside [0, {params.ts})")
    edge = params.ts - eff.ds_eff
    x = (phi0 + params.da) % params.ts
    if x == 0 or x >= edge:
        return params.da
    return _ceil_div(edge - x, params.ta) * params.ta + params.da


def mean_closed_form_ta_le_ds(params: ProtocolParams) -> Fraction:
    """Exact average of closed_form_ta_le_ds over a uniform offset."""
    eff = params.effective()
    if params.ta > eff.ds_eff:
        raise InvalidParamsError(f"closed form needs ta <= ds_eff, got ta={params.ta} ds_eff={eff.ds_eff}")
    ta = params.ta
    q, s = divmod(params.ts - eff.ds_eff, ta)
    area = ta * (ta * q * (q + 1) // 2 + (q + 1) * s)
    return Fraction(area, params.ts) + params.da


def offset_latency(params: ProtocolParams, t_a0: Number, order_limit: Optional[int] = None) -> Optional[Number]:
    """
    Latency of a single start offset following the stage rules point by point.
    None when the point is still undiscovered at a coupling stage.
    """
    eff, schedule = _schedule_for(params, order_limit)
    ts, ds = eff.ts, eff.ds_eff
    edge = ts - ds
    x = (t_a0 + params.da) % ts
    if x == 0 or x >= edge:
        return params.da

    stages = schedule.stages
    acc = 0
    for idx, stage in enumerate(stages):
        if stage.mode is Mode.COUPLING:
            return None
        next_mode = stages[idx + 1].mode if idx + 1 < len(stages) else None
        gamma, sigma = stage.gamma, stage.sigma
        if stage.mode is Mode.GROWING:
            n = _ceil_div(edge - x, gamma)
            y = x + n * gamma
            if y <= ts:
                return acc + n * sigma + params.da
            if next_mode is Mode.SHRINKING:
                x, acc = y - ts, acc + n * sigma
            else:
                x, acc = y - gamma, acc + (n - 1) * sigma
        else:
            n = _ceil_div(x, gamma)
            y = x - n * gamma
            if y >= -ds:
                return acc + n * sigma + params.da
            if next_mode is Mode.GROWING:
                x, acc = y + ts, acc + n * sigma
            else:
                x, acc = y + gamma, acc + (n - 1) * sigma
    return None
