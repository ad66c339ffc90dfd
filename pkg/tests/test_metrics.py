import math

import pytest

from app.core.errors import InvalidParamsError
from app.models.analysis import EnergyParams, Objective
from app.models.params import ProtocolParams
from app.services.metrics_service import energy_metrics, error_metrics
from engine.latency_engine import compute_latency


def test_energy_metrics_mean_latency():
    params = ProtocolParams(ta=26, ts=20, ds=5, da=2)
    result = compute_latency(params, tick=1.0)  # mean 91.7, max 236
    metrics = energy_metrics(result, params, EnergyParams(e_a=2.0, e_s=3.0))
    assert metrics.e_nd_a == pytest.approx(2.0 * (91.7 / 26) * 2)
    assert metrics.e_nd_s == pytest.approx(3.0 * (91.7 / 20) * 5)
    assert metrics.e_nd_joint == pytest.approx(metrics.e_nd_a + metrics.e_nd_s)
    assert metrics.latency_dc_product == pytest.approx((2 / 26) * 91.7)


def test_energy_metrics_worst_case():
    params = ProtocolParams(ta=26, ts=20, ds=5, da=2)
    result = compute_latency(params, tick=1.0)
    metrics = energy_metrics(result, params, EnergyParams(), worst_case=True)
    assert metrics.e_nd_s == pytest.approx((236 / 20) * 5)
    assert metrics.latency_dc_product == pytest.approx((2 / 26) * 236)


def test_energy_metrics_unbounded_for_coupled_instance():
    params = ProtocolParams(ta=20, ts=20, ds=5, da=1)
    metrics = energy_metrics(compute_latency(params), params, EnergyParams())
    assert math.isinf(metrics.e_nd_a)
    assert math.isinf(metrics.e_nd_s)
    assert math.isinf(metrics.latency_dc_product)


def test_error_metrics_basic():
    metrics = error_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 5.0])
    assert metrics.rmse == pytest.approx(math.sqrt(4 / 3))
    assert metrics.nrmse == pytest.approx(1 / 3)
    assert metrics.max_dev == pytest.approx(2.0)
    assert metrics.n_points == 3
    assert metrics.n_excluded == 0


def test_error_metrics_identical_series():
    metrics = error_metrics([0.5, 1.5], [0.5, 1.5])
    assert metrics.rmse == 0.0
    assert metrics.nrmse == 0.0
    assert metrics.max_dev == 0.0


def test_error_metrics_exclusion_threshold():
    metrics = error_metrics(
        [1.0, 2.0, 3.0],
        [1.0, 2.5, 5.0],
        comp_max=[1.5, 2.5, 900.0],
        exclude_above=100.0,
    )
    assert metrics.n_points == 2
    assert metrics.n_excluded == 1
    assert metrics.max_dev == pytest.approx(0.5)


def test_error_metrics_drop_unsimulated_points():
    metrics = error_metrics([1.0, 2.0, math.inf], [1.0, 2.0, math.nan])
    assert metrics.n_points == 2
    assert metrics.n_excluded == 1
    assert metrics.rmse == 0.0


def test_error_metrics_constant_simulation_has_no_nrmse():
    metrics = error_metrics([1.0, 1.2], [1.0, 1.0])
    assert metrics.nrmse is None
    assert metrics.rmse == pytest.approx(math.sqrt(0.02))


@pytest.mark.parametrize(
    "comp, sim, kwargs",
    [
        ([1.0, 2.0], [1.0], {}),
        ([], [], {}),
        ([5.0], [5.0], {"exclude_above": 1.0}),
    ],
)
def test_error_metrics_invalid_input(comp, sim, kwargs):
    with pytest.raises(InvalidParamsError):
        error_metrics(comp, sim, **kwargs)


def test_objective_parse():
    assert Objective.parse("latency_dc_product") is Objective.LATENCY_DC_PRODUCT
    with pytest.raises(InvalidParamsError):
        Objective.parse("throughput")
