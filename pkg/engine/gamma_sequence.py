# engine/gamma_sequence.py
"""
Gamma recursion: how fast the offset between packets and scan windows drifts.

Stage n says that after every sigma_n of advertiser time (i_n packets) the
packet end moves by gamma_n relative to the scan grid, to the right for a
growing stage and to the left for a shrinking one. Each stage refines the
previous one until the step fits into the effective scan window.
"""
from __future__ import annotations

import logging
from typing import Optional

from app.models.gamma import GammaSchedule, GammaStage, Mode, Termination
from app.models.params import EffectiveParams

logger = logging.getLogger(__name__)


def max_order(params: EffectiveParams) -> int:
    """Smallest n with ds_eff * 2**n >= min(Ta, Ts); 0 if the window already covers it."""
    span = min(params.ta, params.ts)
    if span <= params.ds_eff:
        return 0
    n = 0
    reach = params.ds_eff
    while reach < span:
        reach *= 2
        n += 1
    return n


def initial_stage(params: EffectiveParams) -> GammaStage:
    ta, ts = params.ta, params.ts
    if ta < ts:
        return GammaStage(order=0, gamma=ta, mode=Mode.GROWING, sigma=ta, sigma_s=0, d_t=ts)

    gamma_s = -(-ta // ts) * ts - ta
    gamma_g = ta - (ta // ts) * ts
    # equal candidates resolve to shrinking
    if gamma_s <= gamma_g:
        gamma, mode = gamma_s, Mode.SHRINKING
    else:
        gamma, mode = gamma_g, Mode.GROWING
    if gamma == 0:
        mode = Mode.COUPLING
    return GammaStage(order=0, gamma=gamma, mode=mode, sigma=ta, sigma_s=0, d_t=ts)


def next_stage(prev: GammaStage, ds_eff: int = 0) -> GammaStage:
    """
    Refine prev by one order.

    A remainder of exactly half a step moves the offset by r in either
    direction. That only couples when r misses the window (r > ds_eff);
    otherwise the stage takes the flipped direction and ends the recursion.
    """
    if prev.mode is Mode.COUPLING or prev.gamma <= 0:
        raise ValueError(f"stage {prev.order} is terminal (gamma={prev.gamma}, mode={prev.mode.value})")

    q, r = divmod(prev.d_t, prev.gamma)
    twice = 2 * r
    order = prev.order + 1

    if twice <= prev.gamma:
        # remainder up to half a step: the direction flips
        gamma = r
        mode = prev.mode.flipped() if twice < prev.gamma or r <= ds_eff else Mode.COUPLING
        d_t = prev.gamma - r
        sigma = prev.sigma_s + q * prev.sigma
        sigma_s = prev.sigma_s + (q + 1) * prev.sigma
    else:
        gamma = prev.gamma - r
        mode = prev.mode
        d_t = r
        sigma = prev.sigma_s + (q + 1) * prev.sigma
        sigma_s = prev.sigma_s + q * prev.sigma

    if gamma == 0:
        mode = Mode.COUPLING
    return GammaStage(order=order, gamma=gamma, mode=mode, sigma=sigma, sigma_s=sigma_s, d_t=d_t, q=q)


def build_schedule(params: EffectiveParams, order_limit: Optional[int] = None) -> GammaSchedule:
    """
    Stages gamma_0 .. gamma_n until the step fits into the window (gamma <= ds_eff),
    the drift vanishes (coupling) or order_limit is passed.
    """
    bound = max_order(params)
    if order_limit is None:
        order_limit = bound + 2

    stage = initial_stage(params)
    schedule = GammaSchedule(stages=[stage], max_order=bound)
    while True:
        if stage.mode is Mode.COUPLING:
            schedule.termination = Termination.COUPLED
            break
        if stage.gamma <= params.ds_eff:
            schedule.termination = Termination.WINDOW_REACHED
            break
        if stage.order >= order_limit:
            schedule.termination = Termination.ORDER_LIMIT
            logger.warning(
                "gamma recursion hit the order limit %d for ta=%d ts=%d ds_eff=%d",
                order_limit,
                params.ta,
                params.ts,
                params.ds_eff,
            )
            break
        stage = next_stage(stage, params.ds_eff)
        schedule.stages.append(stage)

    logger.debug(
        "schedule ta=%d ts=%d ds_eff=%d: %d stage(s), %s",
        params.ta,
        params.ts,
        params.ds_eff,
        len(schedule.stages),
        schedule.termination.value,
    )
    return schedule
