import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density_matrix, random_params
from polaron_qdm.errors import InvalidStateError
from polaron_qdm.liouvillian import liouvillian_at
from polaron_qdm.observables import (
    check_density_matrix,
    concurrence,
    concurrence_r_matrix,
    initial_state,
    lead_current,
    occupation,
    spin_flip,
    transport_current,
)
from polaron_qdm.params import BiasProtocol, ModelParams, mirrored_couplings
from polaron_qdm.solvers import steady_state
from polaron_qdm.special import fermi_dirac

PSI_PLUS = np.array([0, 1, 1, 0]) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0]) / np.sqrt(2)


def projector(v):
    return np.outer(v, v.conj()).astype(complex)


def werner(p):
    return p * projector(PSI_MINUS) + (1 - p) * np.eye(4) / 4


def test_occupation_examples():
    assert occupation(initial_state(), "A") == 0.0
    assert occupation(np.diag([0, 0, 0, 1.0]), "A") == 1.0
    assert occupation(np.eye(4) / 4, "B") == 0.5


def test_spin_flip_examples():
    bell = projector(PSI_PLUS)
    assert np.abs(spin_flip(bell) - bell).max() <= 1e-15
    assert np.allclose(spin_flip(initial_state()), np.diag([0, 0, 0, 1.0]))
    rho = random_density_matrix(np.random.default_rng(5))
    assert np.abs(spin_flip(spin_flip(rho)) - rho).max() <= 1e-14


def test_concurrence_examples():
    assert concurrence(projector(PSI_PLUS)) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(initial_state()) <= 1e-12
    assert concurrence(np.diag([0.1, 0.2, 0.3, 0.4])) <= 1e-12
    assert concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-10)


@pytest.mark.parametrize("p", np.linspace(0, 1, 21))
def test_werner_grid(p):
    assert concurrence(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)


def test_local_unitary_invariance():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rho = random_density_matrix(rng)
        U = np.kron(scipy.stats.unitary_group.rvs(2, random_state=rng),
                    scipy.stats.unitary_group.rvs(2, random_state=rng))
        assert concurrence(U @ rho @ U.conj().T) == pytest.approx(concurrence(rho), abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_two_routes_agree(seed):
    rho = random_density_matrix(np.random.default_rng(seed))
    c = concurrence(rho)
    assert 0.0 <= c <= 1.0
    assert c == pytest.approx(concurrence_r_matrix(rho), abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_two_routes_agree_low_rank(seed, rank):
    # zero eigenvalues of rho * rho_tilde carry rounding of order 1e-17, which
    # the square root lifts to a few 1e-9
    rho = random_density_matrix(np.random.default_rng(seed), rank)
    assert concurrence(rho) == pytest.approx(concurrence_r_matrix(rho), abs=1e-7)


def test_check_density_matrix():
    check_density_matrix(np.eye(4) / 4)
    with pytest.raises(InvalidStateError):
        check_density_matrix(np.eye(4))
    with pytest.raises(InvalidStateError):
        check_density_matrix(np.diag([1.5, -0.5, 0, 0]))
    with pytest.raises(InvalidStateError):
        check_density_matrix(np.eye(3) / 3)


def _zero_bias_current(params):
    L = liouvillian_at(params, BiasProtocol.dc(0.0), 0.0)
    return transport_current(steady_state(L), L)[0]


def test_zero_bias_current_vanishes(rng):
    for _ in range(5):
        local = random_params(rng, cross_coupling_mode="local")
        assert abs(_zero_bias_current(local)) <= 1e-10
    for kappa in (0.0, 0.262, 0.55, 0.63):
        mirrored = ModelParams(g_ph=0.2).with_couplings(*mirrored_couplings(kappa))
        assert abs(_zero_bias_current(mirrored)) <= 1e-10
    degenerate = random_params(rng, eps_B=1.0, eps_A=1.0)
    assert abs(_zero_bias_current(degenerate)) <= 1e-10


def test_collective_mode_equilibrium_current():
    # geometric-mean cross rates with split levels and unrelated lead
    # couplings do not satisfy detailed balance; the leak is pinned here
    p = ModelParams(eps_A=0.5, eps_B=1.0, T_AL=1.3, T_AR=0.5, T_BL=0.7, T_BR=1.1)
    assert _zero_bias_current(p) == pytest.approx(0.009497495024908504, rel=1e-8)


def test_current_conservation(rng):
    for _ in range(10):
        L = liouvillian_at(random_params(rng), BiasProtocol.dc(rng.uniform(-8, 8)), 0.0)
        _, I_L, I_R = transport_current(steady_state(L), L)
        assert abs(I_L + I_R) <= 1e-10


@pytest.mark.parametrize("gL, gR", [(1.0, 1.0), (1.44, 0.49)])
def test_single_level_current(gL, gR):
    p = ModelParams(T_AL=np.sqrt(gL), T_AR=np.sqrt(gR), eps_B=50.0,
                    cross_coupling_mode="local", temperature=0.2)
    V = 8.0
    L = liouvillian_at(p, BiasProtocol.dc(V), 0.0)
    rho = steady_state(L)
    fL, fR = fermi_dirac(2.0, V / 2, 0.2), fermi_dirac(2.0, -V / 2, 0.2)
    # factor 2 from the dissipator normalisation
    expected = 2 * gL * gR * (fL - fR) / (gL + gR)
    assert lead_current(rho, L.lead_parts["L"]) == pytest.approx(expected, rel=1e-10)
    assert lead_current(rho, L.lead_parts["R"]) == pytest.approx(-expected, rel=1e-10)
