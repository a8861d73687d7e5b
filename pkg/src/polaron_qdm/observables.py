"""Currents, occupations and two-dot concurrence."""
from __future__ import annotations

import numpy as np

from .errors import EigenFailure, InvalidStateError
from .liouvillian import Liouvillian, build_fermion_operators, unvec, vec

__all__ = [
    "check_density_matrix",
    "concurrence",
    "concurrence_r_matrix",
    "initial_state",
    "lead_current",
    "occupation",
    "spin_flip",
    "transport_current",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-8
PSD_TOL = 1e-9
CLAMP_TOL = 1e-8

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def initial_state() -> np.ndarray:
    """Both dots empty: ``|00><00|``."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Return ``rho`` as a complex array or raise :class:`InvalidStateError`."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace {np.trace(rho).real:.12g} differs from 1")
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if min_eig < -PSD_TOL:
        raise InvalidStateError(f"density matrix has eigenvalue {min_eig:.3e}")
    return rho


def lead_current(rho: np.ndarray, L_nu) -> float:
    """Particle current from one lead into the dots, ``Tr[N L_nu(rho)]``.

    Positive values mean electrons enter the dots from that lead.
    """
    M = L_nu.matrix if isinstance(L_nu, Liouvillian) else np.asarray(L_nu)
    drho = unvec(M @ vec(rho))
    return float(np.trace(build_fermion_operators().number @ drho).real)


def transport_current(rho: np.ndarray, L: Liouvillian) -> tuple[float, float, float]:
    """``(I, I_L, I_R)`` with ``I = (I_L - I_R) / 2``."""
    I_L = lead_current(rho, L.lead_parts["L"])
    I_R = lead_current(rho, L.lead_parts["R"])
    return 0.5 * (I_L - I_R), I_L, I_R


def occupation(rho: np.ndarray, dot: str) -> float:
    ops = build_fermion_operators()
    n = ops.n_A if dot == "A" else ops.n_B
    return float(np.trace(np.asarray(rho) @ n).real)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """``(sy x sy) rho* (sy x sy)`` in the ``|n_A n_B>`` basis."""
    return _YY @ np.conj(rho) @ _YY


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence from the spectrum of ``rho @ spin_flip(rho)``.

    Each dot's empty/occupied doublet plays the role of a qubit.
    """
    rho = np.asarray(rho, dtype=complex)
    try:
        ev = np.linalg.eigvals(rho @ spin_flip(rho))
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    ev = ev.real
    if ev.min() < -CLAMP_TOL:
        raise InvalidStateError(f"rho * rho_tilde has eigenvalue {ev.min():.3e}")
    lam = np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _psd_sqrt(A: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (A + A.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def concurrence_r_matrix(rho: np.ndarray) -> float:
    """Same quantity through ``R = sqrt(sqrt(rho) rho_tilde sqrt(rho))``."""
    rho = np.asarray(rho, dtype=complex)
    s = _psd_sqrt(rho)
    R = _psd_sqrt(s @ spin_flip(rho) @ s)
    lam = np.sort(np.linalg.eigvalsh(R))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
