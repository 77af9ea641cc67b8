import math

import pytest

from pmanet.analytics import (
    AnalyticParams,
    MprUtilizationParams,
    compute_metrics,
    cost_dsdv,
    cost_fsr,
    cost_olsr,
    cost_report,
    mean_std,
    mpr_utilization,
    util_model,
)


def test_throughput_definition():
    r = compute_metrics(100, 100 * 512, 0.0, 100, 0, 900.0)
    assert r.throughput == pytest.approx(455.1, abs=0.05)


def test_mean_delay():
    r = compute_metrics(2, 128, 0.1 + 0.3, 2, 0, 10.0)
    assert r.avg_e2ed == pytest.approx(0.2)


def test_nrl_ratio():
    assert compute_metrics(50, 50 * 64, 1.0, 60, 200, 10.0).nrl == 4.0


def test_nothing_delivered_gives_undefined_nrl():
    r = compute_metrics(0, 0, 0.0, 10, 37, 10.0)
    assert r.nrl is None and r.avg_e2ed is None and r.throughput == 0.0


def test_cost_report_product():
    r = compute_metrics(10, 640, 0.5, 10, 30, 10.0)
    c = cost_report(r)
    assert c.combined == pytest.approx(30 * 0.05)


def test_dsdv_cost_examples():
    p = AnalyticParams(n=10, tau_nl=900, tau_per=15)
    assert cost_dsdv(p) == 600
    assert cost_dsdv(AnalyticParams(n=10, tau_nl=900, tau_per=15, link_changes=3)) == 630
    assert cost_dsdv(AnalyticParams(n=10, tau_nl=0, tau_per=15)) == 0


def test_fsr_cost_both_readings():
    c = cost_fsr(AnalyticParams(n=1, tau_nl=900, tau_in=5, tau_out=20, n_in=4, n_out=10))
    assert c.emissions == pytest.approx(225)
    assert c.entry_weighted == pytest.approx(1170)


def test_fsr_equal_intervals_is_single_scope():
    p = AnalyticParams(n=3, tau_nl=100, tau_in=10, tau_out=10, n_in=2, n_out=5)
    c = cost_fsr(p)
    assert c.entry_weighted == pytest.approx(100 * 3 * (2 + 5) / 10)


def test_fsr_empty_outer_scope():
    c = cost_fsr(AnalyticParams(n=1, tau_nl=900, tau_in=5, tau_out=20, n_in=4, n_out=0))
    assert c.entry_weighted == pytest.approx(900 * 4 / 5)


def test_olsr_cost_examples():
    p = AnalyticParams(n=10, tau_nl=900, tau_hello=2, tau_tc=5)
    assert cost_olsr(p) == 4500
    p = AnalyticParams(n=10, tau_nl=900, tau_hello=2, tau_tc=5, selected=4)
    assert cost_olsr(p) == 4500 + 720


def test_utilisation_models():
    assert util_model("dsdv", AnalyticParams(n=50, tau_nl=900, alpha=1 / 15)) == pytest.approx(3000)
    assert util_model("dsdv", AnalyticParams(n=50, tau_nl=900, alpha=0)) == 0
    p = AnalyticParams(n=50, n_in=50, n_out=0, tau_nl=900, alpha_in=1 / 15)
    assert util_model("fsr", p) == pytest.approx(util_model("dsdv", AnalyticParams(n=50, tau_nl=900, alpha=1 / 15)))


@pytest.mark.parametrize("fn,field", [(cost_dsdv, "tau_per")])
def test_costs_fall_as_intervals_grow(fn, field):
    base = dict(n=10, tau_nl=900)
    assert fn(AnalyticParams(**base, **{field: 10})) > fn(AnalyticParams(**base, **{field: 20}))


def test_costs_grow_with_nodes_and_duration():
    for fn in (cost_dsdv, cost_olsr, lambda p: cost_fsr(p).emissions):
        assert fn(AnalyticParams(n=10, tau_nl=900)) < fn(AnalyticParams(n=11, tau_nl=900))
        assert fn(AnalyticParams(n=10, tau_nl=900)) < fn(AnalyticParams(n=10, tau_nl=901))


def test_negative_parameters_rejected():
    with pytest.raises(ValueError):
        AnalyticParams(n=-1)


def test_mpr_utilisation_worked_value():
    assert mpr_utilization(MprUtilizationParams(2e6, 1e6, 10.0, 0.5, 0.1)) == pytest.approx(400.0)


def test_mpr_utilisation_identity_point():
    assert mpr_utilization(MprUtilizationParams(1e6, 1e6, 3.0, 3.0, 1.0)) == 1.0


def test_doubling_delay_halves_score():
    a = mpr_utilization(MprUtilizationParams(2e6, 1e6, 10.0, 0.5, 0.1))
    b = mpr_utilization(MprUtilizationParams(2e6, 1e6, 10.0, 0.5, 0.2))
    assert b == pytest.approx(a / 2)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
def test_mpr_utilisation_domain(bad):
    with pytest.raises(ValueError):
        MprUtilizationParams(2e6, 1e6, 10.0, 0.5, bad)


def test_mean_std_sample():
    m, s = mean_std([1.0, 2.0, 3.0])
    assert m == 2.0 and s == 1.0
    assert mean_std([5.0]) == (5.0, None)
