import numpy as np
import pytest

from polaron_qdm import analysis as an
from polaron_qdm.errors import ConfigError
from polaron_qdm.experiments import COLUMNS, SweepSpec, make_spec, run, run_cv, run_iv
from polaron_qdm.liouvillian import liouvillian_at
from polaron_qdm.observables import concurrence, transport_current
from polaron_qdm.params import BiasProtocol, ModelParams, mirrored_couplings
from polaron_qdm.solvers import steady_state


def small(kind, **user):
    user.setdefault("sweep_count", 41)
    return make_spec(kind, user)


def test_defaults_follow_figure_setups():
    spec = make_spec("iv")
    assert len(spec.grid) == 400 and spec.grid[-1] == 16.0
    assert [s["g_ph"] for s in spec.series] == [0.0, 0.1, 0.2]
    ct = make_spec("ct")
    assert ct.grid[0] == pytest.approx(0.02) and ct.grid[-1] == pytest.approx(20.0)
    assert np.allclose(np.diff(np.log(ct.grid)), np.log(1000) / 399)
    trace = make_spec("trace")
    assert trace.settings["cycles"] == 20 and trace.settings["steps_per_cycle"] == 200


def test_user_series_key_disables_defaults():
    spec = make_spec("iv", {"g_ph": 0.1, "kappa": 0.262})
    assert spec.series == [{}]
    spec = make_spec("iv", {"series": [{"g_ph": 0.0}, {"g_ph": 0.3}]})
    assert spec.labels == ["g_ph=0.0", "g_ph=0.3"]


@pytest.mark.parametrize(
    "kind, user",
    [
        ("iv", {"sweep_count": 1}),
        ("ct", {"sweep_min": 0.0}),
        ("iv", {"sweep_scale": "cubic"}),
        ("nope", {}),
    ],
)
def test_bad_specs(kind, user):
    with pytest.raises(ConfigError):
        make_spec(kind, user)
    with pytest.raises(ConfigError):
        SweepSpec("iv", {}, [])


def test_rows_match_direct_computation():
    rows = run_iv(small("iv", g_ph=0.2, kappa=0.262, sweep_max=8.0, sweep_count=5))
    assert [r["index"] for r in rows] == list(range(5))
    assert set(rows[0]) == set(COLUMNS)
    p = ModelParams(g_ph=0.2).with_couplings(*mirrored_couplings(0.262))
    L = liouvillian_at(p, BiasProtocol.dc(6.0), 0.0)
    rho = steady_state(L)
    I, I_L, I_R = transport_current(rho, L)
    assert rows[3]["V"] == 6.0
    assert rows[3]["I"] == I and rows[3]["I_L"] == I_L
    assert rows[3]["C"] == concurrence(rho)
    assert rows[3]["kappa"] == pytest.approx(0.262)
    assert rows[0]["I"] == pytest.approx(0.0, abs=1e-10)


def test_iv_g0_monotone():
    rows = run_iv(small("iv", g_ph=0.0, kappa=0.0, sweep_count=200))
    I = an.column(rows, "I")
    assert np.all(np.diff(I) >= -1e-12)


def test_cv_local_symmetric_is_zero():
    rows = run_cv(small("cv", kappa=0.0, cross_coupling_mode="local", g_ph=0.1))
    assert max(an.column(rows, "C")) == 0.0


def test_cv_temperature_lowers_concurrence():
    spec = small("cv", series=[{"temperature": T} for T in (0.2, 0.4, 0.8)], g_ph=0.1,
                 sweep_min=4.0, sweep_max=9.0, sweep_count=6)
    rows = run_cv(spec)
    C = [an.column(an.series_rows(rows, s), "C") for s in range(3)]
    assert np.all(C[0] > C[1]) and np.all(C[1] > C[2])


def test_flagged_point_does_not_stop_sweep():
    # dot B decoupled: every stationary point is degenerate
    rows = run_iv(small("iv", T_BL=0.0, T_BR=0.0, kappa=0.3, sweep_count=4))
    assert len(rows) == 4
    assert all(r["flag"].startswith("DegenerateSteadyState") for r in rows)
    assert all(r["I"] is None for r in rows)
    assert an.clean(rows) == []


def test_trace_dc_reaches_steady_values():
    spec = make_spec("trace", {"V_ac": 0.0, "V_dc": 3.0, "t_max": 40.0, "cycles": 4,
                               "steps_per_cycle": 50})
    rows = run(spec)
    p = ModelParams(g_ph=0.1).with_couplings(*mirrored_couplings(0.58))
    L = liouvillian_at(p, BiasProtocol.dc(3.0), 0.0)
    rho = steady_state(L)
    assert rows[-1]["I"] == pytest.approx(transport_current(rho, L)[0], abs=1e-8)
    assert rows[-1]["C"] == pytest.approx(concurrence(rho), abs=1e-7)


def test_trace_periodic_rows_and_discard():
    spec = make_spec("trace", {"V_ac": 2.0, "cycles": 6, "steps_per_cycle": 40,
                               "discard_cycles": 2})
    rows = run(spec)
    assert rows[0]["cycle"] == 2 and rows[-1]["cycle"] == 6
    t = an.column(rows, "t")
    V = an.column(rows, "V")
    assert np.allclose(V, 1.0 + 2.0 * np.cos(4.0 * t))
    C = an.column(rows, "C")
    assert C.min() >= 0.0 and C.max() <= 1.0


def test_trace_random_initial_state_is_seeded():
    user = {"V_ac": 1.0, "cycles": 2, "steps_per_cycle": 20, "initial_state": "random"}
    a = run(make_spec("trace", {**user, "seed": 4}))
    b = run(make_spec("trace", {**user, "seed": 4}))
    c = run(make_spec("trace", {**user, "seed": 5}))
    assert a == b
    assert a[0]["n_A"] != c[0]["n_A"]


def test_analysis_helpers():
    x = np.linspace(0, 10, 101)
    y = np.tanh(5 * (x - 3)) + np.tanh(5 * (x - 7))
    assert np.allclose(an.derivative_peaks(x, y), [3.0, 7.0], atol=0.06)
    c = np.array([0, 0.1, 0.2, 0.05, 0, 0, 0.03, 0.04, 0])
    assert an.zero_intervals(c) == [(0, 1), (4, 6), (8, 9)]
    pat = an.rebirth_pattern(c)
    assert pat["death"] and pat["rebirth"] and pat["revival_max"] == 0.04
    assert an.rebirth_pattern([0.1, 0.2, 0.0, 0.0])["rebirth"] is False
    V = np.linspace(0, 1, 50)
    assert an.flattening_ratio(V, np.minimum(V, 0.5)) == 0.0
    assert an.flattening_ratio(V, V) == pytest.approx(1.0)
