import math

import pytest

import iaqfuse as iq


def test_channels():
    names = iq.channels()
    assert len(names) == 10
    assert "CO2" in names and "Temperature" in names


def test_gl_weights_closed_form():
    w = iq.gl_weights(1.0, 8)
    assert w[0] == 1.0 and w[1] == -1.0
    assert all(abs(x) < 1e-15 for x in w[2:])
    w = iq.gl_weights(0.5, 4)
    assert w[1] == pytest.approx(-0.5)
    assert w[2] == pytest.approx(-0.125)
    with pytest.raises(ValueError):
        iq.gl_weights(2.5, 8)


def test_matern_poles_cluster():
    poles = iq.matern_poles(5.0)
    assert len(poles) == 4
    for p in poles:
        assert p.real == pytest.approx(-math.sqrt(5.0) / 5.0, abs=1e-9)
        assert p.imag == pytest.approx(0.0, abs=1e-9)


def test_fuse_smooths_and_fills_gaps():
    noisy = iq.scenario_series(seed=1)["NH3"]
    truth = iq.scenario_truth(seed=1)["NH3"]
    noisy[30] = math.nan
    noisy[31] = math.nan
    # Process noise scaled to the daily-cycle amplitude (3) at length scale 5.
    lam = math.sqrt(5.0) / 5.0
    q = 3.0 * 3.2 * lam**7 * 3.0**2
    fused = iq.fuse(noisy, l=5.0, alpha=0.9, q=q, r=1.0)
    assert len(fused) == len(noisy)
    assert all(math.isfinite(v) for v in fused)
    pairs = [(a, b) for a, b in zip(noisy, truth) if math.isfinite(a)]
    rmse_raw = math.sqrt(sum((a - b) ** 2 for a, b in pairs) / len(pairs))
    rmse_fused = math.sqrt(
        sum((a - b) ** 2 for a, b in zip(fused, truth)) / len(fused)
    )
    assert rmse_fused < rmse_raw


def test_simulate_ftf_integrator():
    y = iq.simulate_ftf(num=[(1.0, 0.0)], den=[(1.0, 1.0)], input=[1.0] * 11, dt=0.1)
    assert y[10] == pytest.approx(1.0, rel=1e-9)


def test_identify_round_trip():
    dt, n = 0.05, 200
    y = iq.simulate_ftf([(1.0, 0.0)], [(1.0, 1.3), (0.7, 0.5)], [1.0] * n, dt)
    rep = iq.identify(
        y, [1.0] * n, dt,
        num=[(1.0, 0.0)], den=[(1.0, 1.6), (1.2, 0.3)],
        restarts=5, seed=42,
    )
    exps = sorted(e for _, e in rep["den"])
    assert exps[0] == pytest.approx(0.5, abs=1e-4)
    assert exps[1] == pytest.approx(1.3, abs=1e-4)
    assert rep["eps_mse"] < 1e-10
    assert rep["converged"]


def test_evaluate_hand_example():
    rep = iq.evaluate(y_ref=[2.0, 4.0], y_model=[1.0, 2.0])
    assert rep["mape"] == pytest.approx(50.0)
    assert rep["rmse"] == pytest.approx(math.sqrt(2.5))
    assert rep["r2"] == pytest.approx(0.0)
    with pytest.raises(ValueError):
        iq.evaluate([0.0, 1.0], [1.0, 1.0])


def test_indices_worked_values():
    co2 = iq.iaqi("CO2", 230.4295)
    assert co2["value"] == pytest.approx(30.39966, abs=5e-4)
    assert co2["category"] == "Good"
    o2 = iq.iaqi("O2", 19.7347)
    assert o2["value"] == pytest.approx(69.94752, abs=5e-4)
    with pytest.raises(ValueError):
        iq.iaqi("Temperature", 22.0)


def test_overall_and_weightage():
    top = iq.overall_iaqi([30.4, 69.9, 12.0])
    assert top["value"] == pytest.approx(69.9)
    h = iq.humidex(30.0, 100.0)
    assert h["value"] == pytest.approx(47.96, abs=5e-3)
    assert h["rating"] == "Great Discomfort"
    w = iq.weightage("Good", "No Comfort")
    assert w["total"] == 5 and w["label"] == "Better"
    assert iq.categorize(30.4) == "Good"
    assert iq.eiaqi(50.0, 30.0, w_h=1.0, w_iaqi=1.0) == pytest.approx(80.0)


def test_scenario_deterministic():
    a = iq.scenario_series(seed=1)
    b = iq.scenario_series(seed=1)
    c = iq.scenario_series(seed=2)
    assert a.keys() == b.keys() and len(a) == 10
    assert a["CO"] == b["CO"]
    assert a["CO"] != c["CO"]
    truth = iq.scenario_truth(seed=1)
    assert truth["CO"][30] == pytest.approx(
        1.2 + 0.15 * math.sin(2 * math.pi * (30 - 6) / 24) + 0.13
    )
