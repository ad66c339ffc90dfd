# app/services/metrics_service.py
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from app.core.errors import InvalidParamsError
from app.core.units import to_seconds
from app.models.analysis import EnergyMetrics, EnergyParams, ErrorMetrics
from app.models.latency import LatencyResult
from app.models.params import ProtocolParams


def energy_metrics(
    result: LatencyResult,
    params: ProtocolParams,
    energy: EnergyParams,
    *,
    worst_case: bool = False,
) -> EnergyMetrics:
    """
    Discovery energy of advertiser and scanner.

    E_nd_a = E_a * (d / Ta) * da, E_nd_s = E_s * (d / Ts) * ds and the
    latency-duty-cycle product (da / Ta) * d, with d the mean latency, or
    the maximum latency when worst_case is set.
    """
    latency = result.max_ticks if worst_case else result.mean_ticks
    if latency is None:
        return EnergyMetrics(e_nd_a=math.inf, e_nd_s=math.inf, latency_dc_product=math.inf)

    tick = result.tick
    adv_packets = float(latency / params.ta)
    scan_windows = float(latency / params.ts)
    return EnergyMetrics(
        e_nd_a=energy.e_a * adv_packets * to_seconds(params.da, tick),
        e_nd_s=energy.e_s * scan_windows * to_seconds(params.ds, tick),
        latency_dc_product=(params.da / params.ta) * to_seconds(latency, tick),
    )


def error_metrics(
    d_comp: Sequence[float],
    d_sim: Sequence[float],
    *,
    comp_max: Optional[Sequence[float]] = None,
    exclude_above: Optional[float] = None,
) -> ErrorMetrics:
    """
    Deviation between computed and simulated latency series.

    Points whose computed maximum (comp_max, defaulting to d_comp) lies above
    exclude_above are dropped, as are points without a simulated value (nan).
    rmse divides by the number of remaining points; nrmse is rmse**2 over the
    simulated range and None when that range is zero.
    """
    comp = np.asarray(d_comp, dtype=float)
    sim = np.asarray(d_sim, dtype=float)
    if comp.shape != sim.shape:
        raise InvalidParamsError(f"series lengths differ: {comp.size} computed vs {sim.size} simulated")
    if comp.size == 0:
        raise InvalidParamsError("cannot compare empty series")

    keep = ~np.isnan(sim)
    if exclude_above is not None:
        bound = comp if comp_max is None else np.asarray(comp_max, dtype=float)
        if bound.shape != comp.shape:
            raise InvalidParamsError("exclusion series length differs from the computed series")
        keep &= bound <= exclude_above

    n_excluded = int(comp.size - np.count_nonzero(keep))
    comp, sim = comp[keep], sim[keep]
    if comp.size == 0:
        raise InvalidParamsError(f"all {n_excluded} points were excluded")

    diff = comp - sim
    rmse = float(np.sqrt(np.sum(diff**2) / diff.size))
    span = float(sim.max() - sim.min())
    nrmse = rmse**2 / span if span > 0 else None
    return ErrorMetrics(
        rmse=rmse,
        nrmse=nrmse,
        max_dev=float(np.max(np.abs(diff))),
        n_points=int(diff.size),
        n_excluded=n_excluded,
    )
