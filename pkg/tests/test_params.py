import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polaron_qdm.errors import ConfigError, DecoupledDotError
from polaron_qdm.params import (
    BiasProtocol,
    ModelParams,
    asymmetric_factor,
    lead_gamma,
    mirrored_couplings,
    renormalized_levels,
)


def test_renormalized_levels():
    assert renormalized_levels(ModelParams(g_ph=0.0)) == (2.0, 5.0)
    eA, _ = renormalized_levels(ModelParams(g_ph=0.1))
    assert eA == pytest.approx(1.99, abs=1e-15)
    _, eB = renormalized_levels(ModelParams(g_ph=0.3))
    assert eB == pytest.approx(4.91, abs=1e-15)


def test_lead_gamma():
    p = ModelParams(T_AL=1.0, T_AR=0.0, T_BR=2.0)
    assert lead_gamma(p, "L", "A") == 1.0
    assert lead_gamma(p, "R", "A") == 0.0
    assert lead_gamma(p, "R", "B") == 4.0
    with pytest.raises(ConfigError):
        lead_gamma(p, "X", "A")


def test_asymmetric_factor_examples():
    assert asymmetric_factor(ModelParams()) == 0.0
    full = ModelParams(T_AL=1, T_AR=0, T_BL=0, T_BR=1)
    assert asymmetric_factor(full) == 1.0
    half = ModelParams(T_AL=3, T_AR=1, T_BL=1, T_BR=3)
    assert asymmetric_factor(half) == 0.5


def test_asymmetric_factor_decoupled():
    with pytest.raises(DecoupledDotError):
        asymmetric_factor(ModelParams(T_BL=0, T_BR=0))


def test_mirrored_couplings_examples():
    assert mirrored_couplings(0.0, 1.5) == (1.5, 1.5, 1.5, 1.5)
    assert mirrored_couplings(1.0) == (2.0, 0.0, 0.0, 2.0)
    with pytest.raises(ConfigError):
        mirrored_couplings(1.2)


@given(st.floats(0.0, 1.0), st.floats(0.01, 10.0))
def test_mirrored_round_trip(kappa, T0):
    p = ModelParams().with_couplings(*mirrored_couplings(kappa, T0))
    assert asymmetric_factor(p) == pytest.approx(kappa, abs=1e-14)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"temperature": 0.0},
        {"temperature": -1.0},
        {"g_ph": -0.1},
        {"eps_A": math.inf},
        {"T_AL": -1.0},
        {"cross_coupling_mode": "global"},
    ],
)
def test_model_validation(kwargs):
    with pytest.raises(ConfigError):
        ModelParams(**kwargs)


def test_degenerate_detection():
    assert not ModelParams().is_degenerate()
    assert ModelParams(T_BL=0, T_BR=0).is_degenerate()


@given(
    st.floats(-10, 10), st.floats(0, 10), st.floats(0.1, 10), st.floats(0, 1),
    st.floats(0, 100),
)
def test_bias_protocol_window(V_dc, V_ac, omega, split, t):
    protocol = BiasProtocol(V_dc, V_ac, omega, split)
    V = protocol.voltage(t)
    assert V == pytest.approx(V_dc + V_ac * math.cos(omega * t), abs=1e-12)
    mu_L, mu_R = protocol.chemical_potentials(t)
    assert mu_L - mu_R == pytest.approx(V, abs=1e-12)


def test_bias_protocol_period_and_validation():
    assert BiasProtocol.dc(1.0).period == math.inf
    assert BiasProtocol(V_ac=1.0, omega_ac=4.0).period == pytest.approx(math.pi / 2)
    times = np.linspace(0, 3, 7)
    assert np.all(BiasProtocol.dc(2.0).voltage(times) == 2.0)
    with pytest.raises(ConfigError):
        BiasProtocol(V_ac=1.0, omega_ac=0.0)
    with pytest.raises(ConfigError):
        BiasProtocol(lever_split=1.5)
