# scripts/ndlat.py
"""
Command-line front end.

    python scripts/ndlat.py compute --ta 0.1 --ts 2.42 --ds 0.59
    python scripts/ndlat.py sweep --preset b --ta-range 0.01:10.24:0.00125 --out sweep.csv
    python scripts/ndlat.py simulate --ta 0.5 --ts 2.56 --ds 0.32 --runs 10000
    python scripts/ndlat.py compare --input sweep.csv --runs 1000
    python scripts/ndlat.py explore --ds 0.0025 --ta-range 0.0625:5:0.0625 --ts-range 2.5:10:0.0625 \
        --objective latency_dc_product --out grid.csv
    python scripts/ndlat.py bench --ts 10.24 --ds 0.00065 --ta-range 0.02:10.24:0.000625

Exit codes: 0 ok, 1 usage error, 2 invalid parameters, 3 numerical guard.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

# Ensure project root is on sys.path so "app" and "engine" can be imported
ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from app.core.config import Settings  # noqa: E402
from app.core.errors import InvalidParamsError, NumericalGuardError  # noqa: E402
from app.core.logging import configure_logging  # noqa: E402
from app.core.units import to_ticks  # noqa: E402
from app.models.analysis import EnergyParams, ErrorMetrics, Objective  # noqa: E402
from app.models.params import ProtocolParams  # noqa: E402
from app.services.compare_service import compare_sweep, simulate_rows  # noqa: E402
from app.services.sweep_service import (  # noqa: E402
    EXPERIMENT_PRESETS,
    benchmark_ta,
    explore_grid,
    parse_range,
    sweep_ta,
    sweep_ts,
)
from app.simulation.rendezvous_sim import (  # noqa: E402
    first_hit_latencies,
    grid_latencies,
    sample_offsets,
    summarize,
)
from engine.latency_engine import compute_latency  # noqa: E402
from scripts.result_writer import format_seconds, load_sweep, save_runs, save_sweep  # noqa: E402

logger = logging.getLogger("ndlat")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_GUARD = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tick", type=float, default=None, help="seconds per tick (env ND_TICK)")
    common.add_argument("--preset", choices=sorted(EXPERIMENT_PRESETS), default=None)
    common.add_argument("--log-level", default=None)

    params = _Parser(add_help=False)
    params.add_argument("--ta", type=float, default=None, help="advertising interval [s]")
    params.add_argument("--ts", type=float, default=None, help="scan interval [s]")
    params.add_argument("--ds", type=float, default=None, help="scan window [s]")
    params.add_argument("--da", type=float, default=0.0, help="packet duration [s]")

    sim = _Parser(add_help=False)
    sim.add_argument("--horizon", type=float, default=None, help="abort a run after this many seconds")
    sim.add_argument("--runs", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)

    ranges = _Parser(add_help=False)
    ranges.add_argument("--ta-range", default=None, help="start:stop:step [s]")
    ranges.add_argument("--ts-range", default=None, help="start:stop:step [s]")
    ranges.add_argument("--jobs", type=int, default=None)

    energy = _Parser(add_help=False)
    energy.add_argument("--objective", default=Objective.MEAN_LATENCY.value)
    energy.add_argument("--ea", type=float, default=None, help="energy per advertising packet [J]")
    energy.add_argument("--es", type=float, default=None, help="energy per scan window [J]")

    parser = _Parser(prog="ndlat", description="Neighbor-discovery latency toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common, params], help="mean/max latency of one instance")
    p.add_argument("--trace", action="store_true", help="print one line per gamma stage")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("sweep", parents=[common, params, ranges, energy], help="sweep Ta (or Ts) into CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("simulate", parents=[common, params, sim], help="brute-force simulation")
    p.add_argument("--exhaustive", action="store_true", help="every half-tick offset instead of random runs")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("compare", parents=[common, params, sim, ranges], help="model vs simulation error metrics")
    p.add_argument("--input", default=None, help="sweep CSV to compare")
    p.add_argument("--exclude-above", type=float, default=None, help="drop rows whose computed max exceeds this [s]")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("explore", parents=[common, params, ranges, energy], help="Ta x Ts objective grid")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_explore)

    p = sub.add_parser("bench", parents=[common, params, ranges], help="time compute over a Ta sweep")
    p.set_defaults(handler=cmd_bench)
    return parser


# -------------------------------------------------------------------
# helpers
# -------------------------------------------------------------------


def _apply_preset(args: argparse.Namespace) -> None:
    if args.preset is None:
        return
    for key, value in EXPERIMENT_PRESETS[args.preset].items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _params(args: argparse.Namespace) -> ProtocolParams:
    _require(args, "ta", "ts", "ds")
    return ProtocolParams.from_seconds(args.ta, args.ts, args.ds, args.da, tick=args.tick)


def _horizon(args: argparse.Namespace, cfg: Settings) -> int:
    seconds = cfg.horizon if args.horizon is None else args.horizon
    if seconds < 0:
        raise InvalidParamsError(f"--horizon must be non-negative, got {seconds}")
    return to_ticks(seconds, args.tick, "--horizon")


def _energy(args: argparse.Namespace, cfg: Settings) -> EnergyParams:
    return EnergyParams(
        e_a=cfg.energy_adv if args.ea is None else args.ea,
        e_s=cfg.energy_scan if args.es is None else args.es,
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        logger.info("wrote %s", text)


def _metrics_line(label: str, metrics: ErrorMetrics) -> str:
    nrmse = "NA" if metrics.nrmse is None else f"{metrics.nrmse:.9f}"
    return (
        f"{label}: rmse={metrics.rmse:.9f} nrmse={nrmse} md={metrics.max_dev:.9f} "
        f"points={metrics.n_points} excluded={metrics.n_excluded}"
    )


# -------------------------------------------------------------------
# subcommands
# -------------------------------------------------------------------


def cmd_compute(args: argparse.Namespace, cfg: Settings) -> int:
    params = _params(args)
    trace: Optional[List[str]] = [] if args.trace else None
    result = compute_latency(params, tick=args.tick, trace=trace)
    if not result.finite:
        print("mean=INF max=INF coupled=true")
    else:
        print(
            f"mean={format_seconds(result.mean)} max={format_seconds(result.max)} "
            f"min={format_seconds(result.min)} order={result.orders_used}"
        )
    for line in trace or []:
        print(line)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, cfg: Settings) -> int:
    jobs = args.jobs or cfg.jobs
    energy = _energy(args, cfg)
    _require(args, "ds")
    ds = to_ticks(args.ds, args.tick, "--ds")
    da = to_ticks(args.da, args.tick, "--da")
    if args.ts_range is not None and args.ta is not None and args.ta_range is None:
        rows = sweep_ts(
            to_ticks(args.ta, args.tick, "--ta"),
            ds,
            da,
            parse_range(args.ts_range, args.tick, "--ts-range"),
            objective=args.objective,
            energy=energy,
            tick=args.tick,
            jobs=jobs,
        )
    else:
        _require(args, "ts", "ta_range")
        rows = sweep_ta(
            to_ticks(args.ts, args.tick, "--ts"),
            ds,
            da,
            parse_range(args.ta_range, args.tick, "--ta-range"),
            objective=args.objective,
            energy=energy,
            tick=args.tick,
            jobs=jobs,
        )
    _emit(save_sweep(rows, args.out), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: Settings) -> int:
    params = _params(args)
    horizon = _horizon(args, cfg)
    if args.exhaustive:
        latencies = grid_latencies(params, horizon)
        offsets = list(range(params.ts))
    else:
        runs = args.runs or cfg.runs
        seed = cfg.seed if args.seed is None else args.seed
        offsets = sample_offsets(params, runs, seed)
        latencies = first_hit_latencies(params, offsets, horizon)
    summary = summarize(latencies, args.tick)
    if summary.mean_ticks is None:
        mean = max_ = "NA"
    else:
        mean, max_ = format_seconds(summary.mean), format_seconds(summary.max)
    print(f"mean={mean} max={max_} aborted={summary.aborted} runs={summary.n_runs}")
    if args.out is not None:
        logger.info("wrote %s", save_runs(offsets, latencies, Path(args.out)))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, cfg: Settings) -> int:
    horizon = _horizon(args, cfg)
    if args.input is not None:
        rows = load_sweep(Path(args.input), args.tick)
    else:
        _require(args, "ts", "ds", "ta_range")
        rows = sweep_ta(
            to_ticks(args.ts, args.tick, "--ts"),
            to_ticks(args.ds, args.tick, "--ds"),
            to_ticks(args.da, args.tick, "--da"),
            parse_range(args.ta_range, args.tick, "--ta-range"),
            tick=args.tick,
            jobs=args.jobs or cfg.jobs,
        )
    exclude_above = args.exclude_above
    if exclude_above is None:
        exclude_above = cfg.exclude_fraction * horizon * args.tick
    summaries = simulate_rows(
        rows,
        runs=args.runs or cfg.runs,
        seed=cfg.seed if args.seed is None else args.seed,
        horizon=horizon,
        jobs=args.jobs or cfg.jobs,
    )
    comparison = compare_sweep(rows, summaries, exclude_above=exclude_above)
    print(_metrics_line("mean", comparison.mean))
    print(_metrics_line("max", comparison.max))
    return EXIT_OK


def cmd_explore(args: argparse.Namespace, cfg: Settings) -> int:
    _require(args, "ds", "ta_range", "ts_range")
    rows = explore_grid(
        to_ticks(args.ds, args.tick, "--ds"),
        to_ticks(args.da, args.tick, "--da"),
        parse_range(args.ta_range, args.tick, "--ta-range"),
        parse_range(args.ts_range, args.tick, "--ts-range"),
        args.objective,
        energy=_energy(args, cfg),
        tick=args.tick,
        jobs=args.jobs or cfg.jobs,
        truncation_cap=cfg.truncation_cap,
    )
    _emit(save_sweep(rows, args.out), args.out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, cfg: Settings) -> int:
    _require(args, "ts", "ds", "ta_range")
    stats = benchmark_ta(
        to_ticks(args.ts, args.tick, "--ts"),
        to_ticks(args.ds, args.tick, "--ds"),
        to_ticks(args.da, args.tick, "--da"),
        parse_range(args.ta_range, args.tick, "--ta-range"),
        tick=args.tick,
    )
    print(
        f"instances={stats['instances']} total_s={stats['total_s']:.3f} mean_ms={stats['mean_ms']:.3f} "
        f"median_ms={stats['median_ms']:.3f} max_ms={stats['max_ms']:.3f} max_order={stats['max_order']}"
    )
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        cfg = Settings()
    except ValidationError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    configure_logging(args.log_level or cfg.log_level)
    if args.tick is None:
        args.tick = cfg.tick
    _apply_preset(args)

    try:
        if args.tick <= 0:
            raise InvalidParamsError(f"--tick must be positive, got {args.tick}")
        return args.handler(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParamsError, ValidationError, FileNotFoundError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalGuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
