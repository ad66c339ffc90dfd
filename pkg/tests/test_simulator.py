import math
from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import InvalidParamsError, NumericalGuardError
from app.models.params import ProtocolParams
from app.simulation.rendezvous_sim import (
    exhaustive_grid,
    first_hit_latencies,
    grid_latencies,
    monte_carlo,
    offset_state,
    packet_limit,
    simulate_offset,
    summarize,
)
from engine.latency_engine import compute_latency

HORIZON = 10**9


def test_offset_state_phase():
    params = ProtocolParams(ta=26, ts=20, ds=3, da=2)
    state = offset_state(params, Fraction(39, 2))
    assert state.phi == Fraction(3, 2)
    with pytest.raises(InvalidParamsError):
        offset_state(params, 20)


def test_window_bounds_are_inclusive():
    params = ProtocolParams(ta=26, ts=20, ds=3, da=1)
    # packet ends exactly at the window end
    assert simulate_offset(params, 19, HORIZON) == 1
    # packet starts exactly at the window start
    assert simulate_offset(params, 17, HORIZON) == 1
    # half a tick late / early: wait for a later window
    assert simulate_offset(params, Fraction(39, 2), HORIZON) > 1
    assert simulate_offset(params, Fraction(33, 2), HORIZON) > 1


def test_packet_limit():
    params = ProtocolParams(ta=26, ts=20, ds=3)
    # offsets repeat after Ts / gcd(Ta, Ts) = 10 packets
    assert packet_limit(params, HORIZON) == 9
    assert packet_limit(params, 60) == 2
    assert packet_limit(ProtocolParams(ta=26, ts=20, ds=3, da=1), 0) == -1


def test_single_offsets_match_engine_values():
    params = ProtocolParams(ta=26, ts=20, ds=3)
    assert simulate_offset(params, 15, HORIZON) == 104
    assert simulate_offset(params, Fraction(9, 2), HORIZON) == 234


def test_offset_aborted_by_horizon():
    params = ProtocolParams(ta=26, ts=20, ds=3)
    assert simulate_offset(params, Fraction(9, 2), 233) is None
    assert simulate_offset(params, Fraction(9, 2), 234) == 234


def test_grid_and_block_paths_agree():
    params = ProtocolParams(ta=37, ts=20, ds=2, da=1)
    k = np.arange(params.ts)
    grid = grid_latencies(params, HORIZON)
    block = first_hit_latencies(params, k, HORIZON)
    np.testing.assert_array_equal(grid, block)
    for offset, latency in zip(k, grid):
        assert simulate_offset(params, Fraction(2 * int(offset) + 1, 2), HORIZON) == latency


def test_exhaustive_grid_matches_engine():
    params = ProtocolParams(ta=26, ts=20, ds=3)
    summary = exhaustive_grid(params, HORIZON)
    result = compute_latency(params)
    assert summary.aborted == 0
    assert summary.mean_ticks == result.mean_ticks
    assert summary.max_ticks == result.max_ticks


def test_short_advertising_interval_maximum():
    params = ProtocolParams(ta=2, ts=10, ds=4)
    summary = exhaustive_grid(params, HORIZON)
    assert summary.max_ticks == 6


def test_coupled_instance_leaves_offsets_undiscovered():
    params = ProtocolParams(ta=26, ts=20, ds=1)
    for horizon in (10**3, 10**6, HORIZON):
        summary = exhaustive_grid(params, horizon)
        assert summary.aborted > 0
        assert summary.completed > 0


def test_equal_intervals_only_discover_inside_window():
    params = ProtocolParams(ta=100, ts=100, ds=25)
    summary = exhaustive_grid(params, HORIZON)
    assert summary.completed == 25
    assert summary.max_ticks == 0


def test_monte_carlo_is_reproducible():
    params = ProtocolParams(ta=37, ts=20, ds=1)
    first = monte_carlo(params, n_runs=500, seed=3, horizon=HORIZON)
    again = monte_carlo(params, n_runs=500, seed=3, horizon=HORIZON)
    assert first == again
    assert first.aborted == 0
    assert first.max_ticks <= 703


def test_monte_carlo_converges_on_mean():
    params = ProtocolParams(ta=26, ts=20, ds=3)
    summary = monte_carlo(params, n_runs=20_000, seed=11, horizon=HORIZON)
    expected = float(compute_latency(params).mean_ticks)
    assert abs(float(summary.mean_ticks) - expected) < 3 * summary.std_error_ticks


def test_zero_horizon_aborts_every_run():
    params = ProtocolParams(ta=26, ts=20, ds=3, da=1)
    summary = monte_carlo(params, n_runs=50, seed=0, horizon=0)
    assert summary.aborted == 50
    assert summary.mean_ticks is None
    assert math.isnan(summary.mean)
    assert math.isnan(summary.max)


def test_monte_carlo_rejects_zero_runs():
    with pytest.raises(InvalidParamsError):
        monte_carlo(ProtocolParams(ta=26, ts=20, ds=3), n_runs=0, seed=0, horizon=HORIZON)


def test_summarize_skips_aborted_runs():
    summary = summarize(np.array([-1, 4, 6]), tick=0.5)
    assert summary.mean_ticks == 5
    assert summary.max_ticks == 6
    assert summary.aborted == 1
    assert summary.completed == 2
    assert summary.mean == pytest.approx(2.5)
    assert summary.max == pytest.approx(3.0)


def test_grid_guard():
    params = ProtocolParams(ta=1, ts=10**7 + 1, ds=1)
    with pytest.raises(NumericalGuardError):
        grid_latencies(params, HORIZON)
