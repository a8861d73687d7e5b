"""Thermal distributions and phonon sideband weights.

The sideband weights are the discrete form of the polaron correlation
function of a single local mode (independent-boson model).  For Huang-Rhys
factor ``lam`` and Bose occupation ``N`` the weight of the ``l``-phonon line is

    w_l = exp(-lam (2N+1)) I_l(2 lam sqrt(N (N+1))) exp(l / (2T))

with ``l > 0`` meaning net phonon emission.  Everything here is evaluated in
log space so that ``T -> 0`` (where ``N`` underflows and the weights become
Poissonian) is handled without overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import BesselOverflowError, SidebandConvergenceError

__all__ = [
    "SidebandTable",
    "bessel_i",
    "bose_einstein",
    "fermi_dirac",
    "log_bessel_ie",
    "sideband_weights",
]

L_MAX_CAP = 128
DEFAULT_SIDEBAND_TOL = 1e-12

# e^709.78 is the largest finite double
_LOG_DBL_MAX = 709.78


def fermi_dirac(E, mu, temperature):
    """Fermi function ``1 / (exp((E - mu)/T) + 1)``; accepts arrays."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return expit((np.asarray(mu, dtype=float) - E) / temperature)


def bose_einstein(omega, temperature):
    """Bose occupation ``1 / (exp(omega/T) - 1)``."""
    if omega <= 0 or temperature <= 0:
        raise ValueError("omega and temperature must be positive")
    x = omega / temperature
    return math.exp(-x) / -math.expm1(-x)


def _log_ratio_terms(l_max: int, log_z: float, z: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``q_k = log(2(k+1) + z * r_{k+1})`` for ``k = 0..l_max-1`` and the
    full backward-recurrence array.

    ``r_k = I_{k+1}(z)/I_k(z) = z / (2(k+1) + z r_{k+1})`` is run backwards from
    a start order far enough above ``max(l_max, z)`` that the truncation error
    is below double precision.  Then ``log r_k = log z - q_k``.
    """
    start = max(l_max, int(z)) + 40 + int(4.0 * math.sqrt(z + 1.0))
    q = np.empty(start)
    r_next = 0.0
    for k in range(start - 1, -1, -1):
        q[k] = math.log(2.0 * (k + 1) + z * r_next)
        r_next = math.exp(log_z - q[k]) if z > 0 else 0.0
    return q[:l_max], q


def _log_ie0(log_z: float, q_all: np.ndarray) -> float:
    """log(I_0(z) e^{-z}) from the normalisation e^{-z}(I_0 + 2 sum I_l) = 1."""
    if log_z == -math.inf:
        return 0.0
    log_prod = np.cumsum(log_z - q_all)
    # terms below exp(-745) underflow to zero, which is harmless here
    s = 1.0 + 2.0 * np.exp(log_prod).sum()
    return -math.log(s)


def log_bessel_ie(l_max: int, z: float) -> np.ndarray:
    """``log(I_l(z) exp(-z))`` for ``l = 0..l_max``.

    Uses backward ratio recurrence (Miller's method) normalised by the
    generating-function sum, so no value ever overflows.  Entries that are
    exactly zero (``z == 0``, ``l > 0``) come back as ``-inf``.
    """
    if z < 0:
        raise ValueError("z must be non-negative")
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    if z == 0:
        out = np.full(l_max + 1, -np.inf)
        out[0] = 0.0
        return out
    log_z = math.log(z)
    q, q_all = _log_ratio_terms(l_max, log_z, z)
    out = np.empty(l_max + 1)
    out[0] = _log_ie0(log_z, q_all)
    out[1:] = out[0] + np.cumsum(log_z - q)
    return out


def bessel_i(l: int, z: float) -> float:
    """Modified Bessel function of the first kind ``I_l(z)`` for integer ``l``.

    ``I_{-l} = I_l`` is applied before evaluation.  Raises
    :class:`BesselOverflowError` when the value is not representable.
    """
    l = abs(int(l))
    if z < 0:
        raise ValueError("z must be non-negative")
    log_val = log_bessel_ie(l, z)[l] + z
    if log_val > _LOG_DBL_MAX:
        raise BesselOverflowError(f"I_{l}({z}) overflows double precision")
    return math.exp(log_val)


@dataclass(frozen=True)
class SidebandTable:
    """Truncated sideband weights ``w_l`` for ``l = -L_max..L_max``."""

    lam: float
    temperature: float
    n_ph: float
    L_max: int
    weights: np.ndarray = field(repr=False)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.L_max, self.L_max + 1)

    def weight(self, l: int) -> float:
        if abs(l) > self.L_max:
            return 0.0
        return float(self.weights[l + self.L_max])

    def as_dict(self) -> dict[int, float]:
        return {int(l): float(w) for l, w in zip(self.orders, self.weights)}


def _log_weights_nonneg(lam: float, temperature: float, l_max: int) -> np.ndarray:
    """log w_l for l = 0..l_max (lam > 0)."""
    beta = 1.0 / temperature
    n_ph = bose_einstein(1.0, temperature)
    # -lam(2N+1) + z = -lam (sqrt(N+1) - sqrt(N))^2 = -lam / (sqrt(N+1) + sqrt(N))^2
    prefactor = -lam / (math.sqrt(n_ph + 1.0) + math.sqrt(n_ph)) ** 2
    # log z + 1/(2T) with the 1/T pieces cancelled analytically:
    # log N = -beta - log(1 - e^{-beta})
    log_one_minus = math.log(-math.expm1(-beta))
    log_z = math.log(2.0 * lam) + 0.5 * (-beta - log_one_minus) + 0.5 * math.log1p(n_ph)
    a = math.log(2.0 * lam) + 0.5 * math.log1p(n_ph) - 0.5 * log_one_minus
    z = math.exp(log_z)
    q, q_all = _log_ratio_terms(l_max, log_z, z)
    log_ie0 = _log_ie0(log_z, q_all)
    l = np.arange(l_max + 1)
    out = np.empty(l_max + 1)
    out[0] = prefactor + log_ie0
    out[1:] = prefactor + log_ie0 + l[1:] * a - np.cumsum(q)
    return out


def sideband_weights(
    lam: float, temperature: float, tol: float = DEFAULT_SIDEBAND_TOL
) -> SidebandTable:
    """Adaptive table of phonon sideband weights.

    ``L_max`` grows until the last included pair ``w_L + w_{-L}`` drops below
    ``tol`` while the pairs are decreasing; the omitted tail is then bounded by
    a geometric series of that pair.  Raises
    :class:`SidebandConvergenceError` if ``L_max`` would exceed 128.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if not 0 < tol < 1e-6:
        raise ValueError("tol must lie in (0, 1e-6)")
    n_ph = bose_einstein(1.0, temperature)
    if lam == 0:
        return SidebandTable(lam, temperature, n_ph, 0, np.ones(1))

    log_w = _log_weights_nonneg(lam, temperature, L_MAX_CAP + 1)
    pos = np.exp(log_w)
    neg = np.exp(log_w - np.arange(L_MAX_CAP + 2) / temperature)
    pair = pos + neg
    pair[0] = pos[0]

    L_max = None
    for L in range(1, L_MAX_CAP + 1):
        # ratio of the next pair bounds the geometric tail of the remainder
        ratio = pair[L + 1] / pair[L] if pair[L] > 0 else 0.0
        if ratio < 1.0 and pair[L] < tol * (1.0 - ratio):
            L_max = L
            break
    if L_max is None:
        raise SidebandConvergenceError(
            f"sideband series for lam={lam}, T={temperature} needs more than "
            f"{L_MAX_CAP} orders at tol={tol}"
        )
    weights = np.concatenate([neg[L_max:0:-1], pos[: L_max + 1]])
    return SidebandTable(lam, temperature, n_ph, L_max, weights)
