# app/services/compare_service.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence

from app.models.analysis import ErrorMetrics, SweepRow
from app.models.params import ProtocolParams
from app.models.simulation import SimSummary
from app.services.metrics_service import error_metrics
from app.services.sweep_service import fan_out
from app.simulation.rendezvous_sim import monte_carlo

logger = logging.getLogger(__name__)

CSV_DECIMALS = 9


@dataclass(frozen=True)
class Comparison:
    mean: ErrorMetrics
    max: ErrorMetrics


def _simulate_row(indexed: tuple, *, runs: int, seed: int, horizon: int) -> SimSummary:
    index, row = indexed
    params = ProtocolParams(ta=row.ta, ts=row.ts, ds=row.ds, da=row.da)
    # one independent, reproducible stream per row
    return monte_carlo(params, n_runs=runs, seed=seed + index, horizon=horizon, tick=row.tick)


def simulate_rows(
    rows: Sequence[SweepRow],
    *,
    runs: int,
    seed: int,
    horizon: int,
    jobs: int = 1,
) -> List[SimSummary]:
    fn = partial(_simulate_row, runs=runs, seed=seed, horizon=horizon)
    summaries = fan_out(fn, list(enumerate(rows)), jobs)
    logger.info("simulated %d row(s) with %d run(s) each", len(summaries), runs)
    return summaries


def compare_sweep(
    rows: Sequence[SweepRow],
    summaries: Sequence[SimSummary],
    *,
    exclude_above: Optional[float] = None,
) -> Comparison:
    """
    Mean and max deviation between model rows and simulation summaries.

    Model values are taken at CSV precision so a sweep compared in memory
    and the same sweep re-read from its CSV give identical metrics.
    """
    comp_mean = [round(row.mean, CSV_DECIMALS) for row in rows]
    comp_max = [round(row.max, CSV_DECIMALS) for row in rows]
    sim_mean = [s.mean for s in summaries]
    sim_max = [s.max for s in summaries]
    return Comparison(
        mean=error_metrics(comp_mean, sim_mean, comp_max=comp_max, exclude_above=exclude_above),
        max=error_metrics(comp_max, sim_max, comp_max=comp_max, exclude_above=exclude_above),
    )
