# app/services/sweep_service.py
"""
Parameter sweeps and design-space grids on top of compute_latency.

All inputs are ticks. Rows come back in grid order no matter how many
worker processes evaluated them.
"""
from __future__ import annotations

import logging
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from app.core.config import settings
from app.core.errors import InvalidParamsError
from app.core.units import to_ticks
from app.models.analysis import EnergyParams, Objective, Range, SweepRow
from app.models.latency import LatencyResult
from app.models.params import ProtocolParams
from app.services.metrics_service import energy_metrics
from engine.latency_engine import compute_latency

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# (Ts, ds) of the validation experiments; "g" fixes (Ta, ds) and sweeps Ts.
EXPERIMENT_PRESETS: Dict[str, Dict[str, float]] = {
    "a": {"ts": 2.42, "ds": 0.59},
    "b": {"ts": 2.56, "ds": 0.32},
    "c": {"ts": 2.56, "ds": 0.64},
    "d": {"ts": 7.68, "ds": 0.32},
    "e": {"ts": 2.56, "ds": 0.2015},
    "f": {"ts": 5.12, "ds": 0.32},
    "g": {"ta": 5.12, "ds": 0.64},
}

# every advertising interval BLE allows: 20 ms .. 10.24 s in 0.625 ms steps (16,353 values)
BLE_TA_RANGE = (0.02, 10.24, 0.000625)


def parse_range(text: str, tick: float, flag: str = "--range") -> Range:
    """Parse "start:stop:step" (seconds) into a tick Range."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParamsError(f"{flag} expects start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InvalidParamsError(f"{flag} has a non-numeric field in {text!r}") from None
    return Range(
        start=to_ticks(start, tick, flag),
        stop=to_ticks(stop, tick, flag),
        step=to_ticks(step, tick, flag),
    )


def objective_value(
    result: LatencyResult,
    params: ProtocolParams,
    objective: Objective,
    energy: EnergyParams,
) -> float:
    if objective is Objective.MEAN_LATENCY:
        return result.mean
    if objective is Objective.MAX_LATENCY:
        return result.max

    worst = objective in (
        Objective.MAX_ENERGY_ADV,
        Objective.MAX_ENERGY_SCAN,
        Objective.MAX_ENERGY_JOINT,
        Objective.POWER_LATENCY_PRODUCT,
    )
    metrics = energy_metrics(result, params, energy, worst_case=worst)
    if objective in (Objective.ENERGY_ADV, Objective.MAX_ENERGY_ADV):
        return metrics.e_nd_a
    if objective in (Objective.ENERGY_SCAN, Objective.MAX_ENERGY_SCAN):
        return metrics.e_nd_s
    if objective in (Objective.ENERGY_JOINT, Objective.MAX_ENERGY_JOINT):
        return metrics.e_nd_joint
    return metrics.latency_dc_product


def evaluate(
    params: ProtocolParams,
    objective: Objective = Objective.MEAN_LATENCY,
    energy: EnergyParams = EnergyParams(),
    tick: float = settings.tick,
    cap: Optional[float] = None,
) -> SweepRow:
    result = compute_latency(params, tick=tick)
    value = objective_value(result, params, objective, energy)
    if cap is not None and value > cap:
        value = cap
    return SweepRow(
        ta=params.ta,
        ts=params.ts,
        ds=params.ds,
        da=params.da,
        mean_ticks=result.mean_ticks,
        max_ticks=result.max_ticks,
        order=result.orders_used,
        objective=value,
        tick=tick,
    )


def fan_out(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> List[R]:
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items, chunksize=chunk))


def evaluate_many(
    instances: Sequence[ProtocolParams],
    objective: Objective | str = Objective.MEAN_LATENCY,
    energy: Optional[EnergyParams] = None,
    *,
    tick: float = settings.tick,
    jobs: int = 1,
    cap: Optional[float] = None,
) -> List[SweepRow]:
    if isinstance(objective, str):
        objective = Objective.parse(objective)
    energy = energy or EnergyParams()
    fn = partial(evaluate, objective=objective, energy=energy, tick=tick, cap=cap)
    started = time.perf_counter()
    rows = fan_out(fn, list(instances), jobs)
    logger.info("evaluated %d instance(s) in %.2f s with %d job(s)", len(rows), time.perf_counter() - started, jobs)
    return rows


def _instances(pairs: Iterable[Tuple[int, int]], ds: int, da: int) -> List[ProtocolParams]:
    try:
        return [ProtocolParams(ta=ta, ts=ts, ds=ds, da=da) for ta, ts in pairs]
    except ValueError as exc:
        raise InvalidParamsError(str(exc)) from exc


def sweep_ta(
    ts: int,
    ds: int,
    da: int,
    ta_range: Range,
    *,
    objective: Objective | str = Objective.MEAN_LATENCY,
    energy: Optional[EnergyParams] = None,
    tick: float = settings.tick,
    jobs: int = 1,
) -> List[SweepRow]:
    """One row per advertising interval, ascending."""
    instances = _instances(((ta, ts) for ta in ta_range.values()), ds, da)
    return evaluate_many(instances, objective, energy, tick=tick, jobs=jobs)


def sweep_ts(
    ta: int,
    ds: int,
    da: int,
    ts_range: Range,
    *,
    objective: Objective | str = Objective.MEAN_LATENCY,
    energy: Optional[EnergyParams] = None,
    tick: float = settings.tick,
    jobs: int = 1,
) -> List[SweepRow]:
    """One row per scan interval, ascending, for a fixed advertising interval."""
    if ts_range.start < ds:
        raise InvalidParamsError(f"scan interval range starts at {ts_range.start}, below the window ds={ds}")
    instances = _instances(((ta, ts) for ts in ts_range.values()), ds, da)
    return evaluate_many(instances, objective, energy, tick=tick, jobs=jobs)


def explore_grid(
    ds: int,
    da: int,
    ta_range: Range,
    ts_range: Range,
    objective: Objective | str,
    *,
    energy: Optional[EnergyParams] = None,
    tick: float = settings.tick,
    jobs: int = 1,
    truncation_cap: float = settings.truncation_cap,
) -> List[SweepRow]:
    """
    Full Ts x Ta grid (Ts outer, Ta inner). Objective values above
    truncation_cap, infinity included, are clamped to the cap.
    """
    if isinstance(objective, str):
        objective = Objective.parse(objective)
    if ts_range.start < ds:
        raise InvalidParamsError(f"scan interval range starts at {ts_range.start}, below the window ds={ds}")
    pairs = [(ta, ts) for ts in ts_range.values() for ta in ta_range.values()]
    instances = _instances(pairs, ds, da)
    return evaluate_many(instances, objective, energy, tick=tick, jobs=jobs, cap=truncation_cap)


def benchmark_ta(
    ts: int,
    ds: int,
    da: int,
    ta_range: Range,
    *,
    tick: float = settings.tick,
) -> Dict[str, float]:
    """Wall time of compute_latency per advertising interval, single process."""
    timings: List[float] = []
    max_order = 0
    for ta in ta_range.values():
        params = ProtocolParams(ta=ta, ts=ts, ds=ds, da=da)
        started = time.perf_counter()
        result = compute_latency(params, tick=tick)
        timings.append(time.perf_counter() - started)
        max_order = max(max_order, result.orders_used)
    return {
        "instances": len(timings),
        "total_s": math.fsum(timings),
        "mean_ms": 1e3 * statistics.fmean(timings),
        "median_ms": 1e3 * statistics.median(timings),
        "max_ms": 1e3 * max(timings),
        "max_order": max_order,
    }
