# app/simulation/rendezvous_sim.py
"""
Brute-force advertiser/scanner rendezvous.

A packet sent at t is received when it lies inside a scan window:
j*Ts - ds <= t <= j*Ts - da for some j (both bounds inclusive).
Offsets are taken at half ticks (k + 1/2); every model boundary is an
integer, so each half-tick sample stands for its whole unit cell.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from app.core.errors import InvalidParamsError, NumericalGuardError
from app.models.params import ProtocolParams
from app.models.simulation import OffsetState, SimSummary

logger = logging.getLogger(__name__)

MAX_GRID_TICKS = 10**7
BLOCK_PACKETS = 256
HALF = Fraction(1, 2)


def offset_state(params: ProtocolParams, t_a0: int | Fraction) -> OffsetState:
    t_a0 = Fraction(t_a0)
    if not 0 <= t_a0 < params.ts:
        raise InvalidParamsError(f"start offset {t_a0} outside [0, {params.ts})")
    return OffsetState(t_a0=t_a0, phi=(t_a0 + params.da) % params.ts)


def packet_limit(params: ProtocolParams, horizon: int) -> int:
    """
    Index of the last packet worth checking, -1 if none fits the horizon.

    Packet offsets repeat after Ts / gcd(Ta, Ts) packets, so later ones
    cannot produce a first hit.
    """
    if horizon < params.da:
        return -1
    by_horizon = (horizon - params.da) // params.ta
    cycle = params.ts // math.gcd(params.ta, params.ts)
    return min(by_horizon, cycle - 1)


def simulate_offset(params: ProtocolParams, t_a0: int | Fraction, horizon: int) -> Optional[int]:
    """Latency in ticks from the first transmission to full reception, None if aborted."""
    state = offset_state(params, t_a0)
    edge = params.ts - (params.ds - params.da)
    x = state.phi
    for i in range(packet_limit(params, horizon) + 1):
        if x == 0 or x >= edge:
            return i * params.ta + params.da
        x = (x + params.ta) % params.ts
    return None


def first_hit_latencies(params: ProtocolParams, k: np.ndarray, horizon: int) -> np.ndarray:
    """
    Latencies for offsets k + 1/2 (k integer array), -1 where aborted.
    Packets are checked in blocks against all pending offsets at once.
    """
    ts, ta, da = params.ts, params.ta, params.da
    ds_eff = params.ds - da
    k = np.asarray(k, dtype=np.int64)
    lat = np.full(k.shape[0], -1, dtype=np.int64)
    pending = np.arange(k.shape[0])
    limit = packet_limit(params, horizon)

    i0 = 0
    while i0 <= limit and pending.size:
        i = np.arange(i0, min(i0 + BLOCK_PACKETS, limit + 1), dtype=np.int64)
        shift = (da + i * ta) % ts
        start = (ts - ds_eff - shift) % ts
        hit = (k[pending][:, None] - start[None, :]) % ts < ds_eff
        any_hit = hit.any(axis=1)
        first = hit.argmax(axis=1)
        lat[pending[any_hit]] = i[first[any_hit]] * ta + da
        pending = pending[~any_hit]
        i0 += BLOCK_PACKETS
    return lat


def grid_latencies(params: ProtocolParams, horizon: int) -> np.ndarray:
    """Latency at every offset k + 1/2, k = 0 .. Ts-1, -1 where aborted."""
    ts, ta, da = params.ts, params.ta, params.da
    if ts > MAX_GRID_TICKS:
        raise NumericalGuardError(f"exhaustive grid of {ts} offsets exceeds the {MAX_GRID_TICKS} limit")
    ds_eff = params.ds - da
    lat = np.full(ts, -1, dtype=np.int64)
    remaining = ts

    for i in range(packet_limit(params, horizon) + 1):
        start = (ts - ds_eff - (da + i * ta)) % ts
        stop = start + ds_eff
        spans = [(start, min(stop, ts))]
        if stop > ts:
            spans.append((0, stop - ts))
        for a, b in spans:
            window = lat[a:b]
            fresh = window < 0
            n = int(np.count_nonzero(fresh))
            if n:
                window[fresh] = i * ta + da
                remaining -= n
        if remaining == 0:
            break
    return lat


def summarize(latencies: np.ndarray, tick: float = 1e-6) -> SimSummary:
    done = latencies[latencies >= 0]
    n_runs = int(latencies.shape[0])
    aborted = n_runs - int(done.shape[0])
    if done.size == 0:
        return SimSummary(mean_ticks=None, max_ticks=None, aborted=aborted, n_runs=n_runs, tick=tick)
    std_error = float(done.std(ddof=1) / math.sqrt(done.size)) if done.size > 1 else 0.0
    return SimSummary(
        mean_ticks=Fraction(int(done.sum()), int(done.size)),
        max_ticks=int(done.max()),
        aborted=aborted,
        n_runs=n_runs,
        std_error_ticks=std_error,
        tick=tick,
    )


def exhaustive_grid(params: ProtocolParams, horizon: int, tick: float = 1e-6) -> SimSummary:
    latencies = grid_latencies(params, horizon)
    summary = summarize(latencies, tick)
    logger.debug("grid ta=%d ts=%d ds=%d: %d aborted of %d", params.ta, params.ts, params.ds, summary.aborted, summary.n_runs)
    return summary


def sample_offsets(params: ProtocolParams, n_runs: int, seed: int) -> np.ndarray:
    if n_runs < 1:
        raise InvalidParamsError(f"n_runs must be at least 1, got {n_runs}")
    rng = np.random.default_rng(seed)
    return rng.integers(0, params.ts, size=n_runs, dtype=np.int64)


def monte_carlo(
    params: ProtocolParams,
    n_runs: int,
    seed: int,
    horizon: int,
    tick: float = 1e-6,
) -> SimSummary:
    """Uniform random start offsets, reproducible for a given seed."""
    k = sample_offsets(params, n_runs, seed)
    return summarize(first_hit_latencies(params, k, horizon), tick)


if __name__ == "__main__":
    demo = ProtocolParams(ta=26, ts=20, ds=3, da=0)
    print(exhaustive_grid(demo, horizon=10_000))
    print(monte_carlo(demo, n_runs=1000, seed=1, horizon=10_000))
