from __future__ import annotations

import io
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from app.core.units import to_seconds, to_ticks
from app.models.analysis import SweepRow

SWEEP_COLUMNS = ["Ta", "Ts", "ds", "da", "mean", "max", "order", "duty_cycle_adv", "objective"]
RUN_COLUMNS = ["offset_ticks", "latency_ticks", "aborted"]
INF_TOKEN = "INF"


def format_seconds(value: float) -> str:
    if math.isinf(value):
        return INF_TOKEN
    return f"{value:.9f}"


def _write(df: pd.DataFrame, path: Optional[Path]) -> str:
    """Write to path (creating its directory) or return the CSV text when path is None."""
    if path is None:
        buf = io.StringIO()
        df.to_csv(buf, index=False, lineterminator="\n")
        return buf.getvalue()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, lineterminator="\n")
    return str(path)


def sweep_frame(rows: Iterable[SweepRow]) -> pd.DataFrame:
    """
    Sweep rows as text columns:
        Ta, Ts, ds, da, mean, max (seconds, 9 decimals, INF for unbounded),
        order, duty_cycle_adv, objective
    """
    records = []
    for row in rows:
        records.append(
            {
                "Ta": format_seconds(to_seconds(row.ta, row.tick)),
                "Ts": format_seconds(to_seconds(row.ts, row.tick)),
                "ds": format_seconds(to_seconds(row.ds, row.tick)),
                "da": format_seconds(to_seconds(row.da, row.tick)),
                "mean": format_seconds(row.mean),
                "max": format_seconds(row.max),
                "order": str(row.order),
                "duty_cycle_adv": format_seconds(row.duty_cycle_adv),
                "objective": format_seconds(row.objective),
            }
        )
    return pd.DataFrame(records, columns=SWEEP_COLUMNS)


def save_sweep(rows: Iterable[SweepRow], path: Optional[Path] = None) -> str:
    return _write(sweep_frame(rows), path)


def _ticks_value(text: str, tick_frac: Fraction) -> Optional[Fraction]:
    if text == INF_TOKEN:
        return None
    return Fraction(text) / tick_frac


def load_sweep(path: Path, tick: float) -> List[SweepRow]:
    """Read a sweep CSV back into rows (times re-aligned to the tick)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"sweep CSV not found at {path}")
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [c for c in SWEEP_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: missing columns {', '.join(missing)}")

    tick_frac = Fraction(str(tick))
    rows: List[SweepRow] = []
    for rec in df.to_dict(orient="records"):
        max_ticks = _ticks_value(rec["max"], tick_frac)
        objective = rec["objective"]
        rows.append(
            SweepRow(
                ta=to_ticks(float(rec["Ta"]), tick, "Ta"),
                ts=to_ticks(float(rec["Ts"]), tick, "Ts"),
                ds=to_ticks(float(rec["ds"]), tick, "ds"),
                da=to_ticks(float(rec["da"]), tick, "da"),
                mean_ticks=_ticks_value(rec["mean"], tick_frac),
                max_ticks=None if max_ticks is None else round(max_ticks),
                order=int(rec["order"]),
                objective=math.inf if objective == INF_TOKEN else float(objective),
                tick=tick,
            )
        )
    return rows


def save_runs(
    offsets_k: Sequence[int] | np.ndarray,
    latencies: Sequence[int] | np.ndarray,
    path: Optional[Path] = None,
) -> str:
    """Per-run simulator output; offsets are the half-tick sample points k + 0.5."""
    k = np.asarray(offsets_k, dtype=np.int64)
    lat = np.asarray(latencies, dtype=np.int64)
    df = pd.DataFrame(
        {
            "offset_ticks": [f"{int(v)}.5" for v in k],
            "latency_ticks": [str(int(v)) if v >= 0 else "" for v in lat],
            "aborted": (lat < 0).astype(int),
        },
        columns=RUN_COLUMNS,
    )
    return _write(df, path)
