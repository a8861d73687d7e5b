"""Fermion operators, polaron tunnelling rates and the master-equation generator.

Fock basis ordering is ``|n_A n_B>`` with index ``2 n_A + n_B``:
``|00>, |01>, |10>, |11>``.  Jordan-Wigner order puts A before B.

Density matrices are vectorised by column stacking, so that
``vec(A rho B) = kron(B.T, A) @ vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .params import DOTS, LEADS, BiasProtocol, ModelParams, lead_gamma, renormalized_levels
from .special import DEFAULT_SIDEBAND_TOL, SidebandTable, fermi_dirac, sideband_weights

__all__ = [
    "FOCK_BASIS",
    "FermionOps",
    "Liouvillian",
    "RateSet",
    "DrivenGenerator",
    "build_fermion_operators",
    "build_liouvillian",
    "lead_superops_batch",
    "liouvillian_at",
    "tunneling_rates",
    "unvec",
    "vec",
]

FOCK_BASIS = ("00", "01", "10", "11")
DIM = 4


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def spre(A: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(A.shape[0]), A)


def spost(B: np.ndarray) -> np.ndarray:
    return np.kron(B.T, np.eye(B.shape[0]))


def sandwich(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> A rho B``."""
    return np.kron(B.T, A)


@dataclass(frozen=True)
class FermionOps:
    d_A: np.ndarray
    d_B: np.ndarray

    @property
    def dag_A(self) -> np.ndarray:
        return self.d_A.conj().T

    @property
    def dag_B(self) -> np.ndarray:
        return self.d_B.conj().T

    @property
    def n_A(self) -> np.ndarray:
        return self.dag_A @ self.d_A

    @property
    def n_B(self) -> np.ndarray:
        return self.dag_B @ self.d_B

    @property
    def number(self) -> np.ndarray:
        return self.n_A + self.n_B

    def lowering(self, dot: str) -> np.ndarray:
        return self.d_A if dot == "A" else self.d_B


@lru_cache(maxsize=1)
def build_fermion_operators() -> FermionOps:
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    parity = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    d_A = np.kron(lower, eye)
    d_B = np.kron(parity, lower)
    d_A.setflags(write=False)
    d_B.setflags(write=False)
    return FermionOps(d_A, d_B)


@dataclass(frozen=True)
class RateSet:
    """Polaron tunnelling rates in units of Gamma_0.

    ``m_in[lead][dot]`` fills dot ``dot`` from ``lead``; ``m_out`` empties it.
    Cross rates couple the two dots through a common lead.
    """

    m_in: dict[str, tuple[float, float]]
    m_out: dict[str, tuple[float, float]]
    cross_in: dict[str, float]
    cross_out: dict[str, float]

    def lead_matrix(self, lead: str, direction: str) -> np.ndarray:
        """2x2 dot-space rate matrix of one lead and direction ('in'/'out')."""
        diag = self.m_in[lead] if direction == "in" else self.m_out[lead]
        cross = self.cross_in[lead] if direction == "in" else self.cross_out[lead]
        return np.array([[diag[0], cross], [cross, diag[1]]])


def _sideband_table(params: ModelParams, tol: float) -> SidebandTable:
    return _cached_sidebands(params.huang_rhys, params.temperature, tol)


@lru_cache(maxsize=4096)
def _cached_sidebands(lam: float, temperature: float, tol: float) -> SidebandTable:
    return sideband_weights(lam, temperature, tol)


def _sideband_sums(table: SidebandTable, level: float, mu, temperature: float):
    """Return (sum_l w_l f(level + l), sum_l w_l [1 - f(level - l)]).

    ``mu`` may be an array; the sums are then evaluated for every entry.
    """
    mu = np.asarray(mu, dtype=float)
    orders = table.orders.astype(float)
    w = table.weights
    filled = fermi_dirac(level + orders, mu[..., None], temperature)
    # 1 - f(E) written directly to avoid cancellation
    empty = expit((level - orders - mu[..., None]) / temperature)
    return filled @ w, empty @ w


def tunneling_rates(
    params: ModelParams, mu_L: float, mu_R: float, tol: float = DEFAULT_SIDEBAND_TOL
) -> RateSet:
    """Sideband-summed tunnelling rates at fixed chemical potentials."""
    table = _sideband_table(params, tol)
    levels = dict(zip(DOTS, renormalized_levels(params)))
    mus = {"L": mu_L, "R": mu_R}
    m_in, m_out, cross_in, cross_out = {}, {}, {}, {}
    for lead in LEADS:
        ins, outs = [], []
        for dot in DOTS:
            gamma = lead_gamma(params, lead, dot)
            filled, empty = _sideband_sums(table, levels[dot], mus[lead], params.temperature)
            ins.append(gamma * float(filled))
            outs.append(gamma * float(empty))
        m_in[lead] = tuple(ins)
        m_out[lead] = tuple(outs)
        if params.cross_coupling_mode == "collective":
            cross_in[lead] = float(np.sqrt(ins[0] * ins[1]))
            cross_out[lead] = float(np.sqrt(outs[0] * outs[1]))
        else:
            cross_in[lead] = cross_out[lead] = 0.0
    return RateSet(m_in, m_out, cross_in, cross_out)


def _dissipator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> 2 a rho b^+ - b^+ a rho - rho b^+ a``."""
    bd = b.conj().T
    return 2 * sandwich(a, bd) - spre(bd @ a) - spost(bd @ a)


@lru_cache(maxsize=1)
def _channel_superops() -> np.ndarray:
    """Fixed superoperators multiplying the six rates of one lead.

    Order: out_A, out_B, in_A, in_B, cross_out, cross_in.
    """
    ops = build_fermion_operators()
    dA, dB = ops.d_A, ops.d_B
    uA, uB = ops.dag_A, ops.dag_B
    stack = np.array(
        [
            _dissipator(dA, dA),
            _dissipator(dB, dB),
            _dissipator(uA, uA),
            _dissipator(uB, uB),
            _dissipator(dA, dB) + _dissipator(dB, dA),
            _dissipator(uA, uB) + _dissipator(uB, uA),
        ]
    )
    # every channel is real in this basis
    stack = np.ascontiguousarray(stack.real)
    stack.setflags(write=False)
    return stack


def _lead_coefficients(rates: RateSet, lead: str) -> np.ndarray:
    return np.array(
        [
            rates.m_out[lead][0],
            rates.m_out[lead][1],
            rates.m_in[lead][0],
            rates.m_in[lead][1],
            rates.cross_out[lead],
            rates.cross_in[lead],
        ]
    )


def coherent_superop(params: ModelParams) -> np.ndarray:
    """``rho -> -i [H_dots, rho]`` with polaron-shifted levels and hopping."""
    ops = build_fermion_operators()
    eA, eB = renormalized_levels(params)
    hop = ops.dag_A @ ops.d_B
    H = eA * ops.n_A + eB * ops.n_B + params.t_AB * (hop + hop.conj().T)
    return -1j * (spre(H) - spost(H))


@dataclass(frozen=True)
class Liouvillian:
    """16x16 generator acting on column-stacked density matrices."""

    matrix: np.ndarray
    lead_parts: dict[str, np.ndarray] = field(repr=False)
    params: ModelParams | None = None
    bias: float | None = None

    def __matmul__(self, other):
        return self.matrix @ other

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    @property
    def norm_inf(self) -> float:
        return float(np.abs(self.matrix).sum(axis=1).max())


def build_liouvillian(
    params: ModelParams, rates: RateSet, bias: float | None = None
) -> Liouvillian:
    channels = _channel_superops()
    lead_parts = {
        lead: np.tensordot(_lead_coefficients(rates, lead), channels, axes=1) for lead in LEADS
    }
    total = lead_parts["L"] + lead_parts["R"]
    if params.coherent_term_enabled:
        total = total + coherent_superop(params)
    return Liouvillian(total, lead_parts, params, bias)


def liouvillian_at(
    params: ModelParams, protocol: BiasProtocol, t: float, tol: float = DEFAULT_SIDEBAND_TOL
) -> Liouvillian:
    """Generator with rates following the instantaneous bias ``V(t)``."""
    mu_L, mu_R = protocol.chemical_potentials(t)
    rates = tunneling_rates(params, float(mu_L), float(mu_R), tol)
    return build_liouvillian(params, rates, bias=float(protocol.voltage(t)))


def lead_superops_batch(
    params: ModelParams, mu_L: np.ndarray, mu_R: np.ndarray, tol: float = DEFAULT_SIDEBAND_TOL
) -> dict[str, np.ndarray]:
    """Per-lead generators for many chemical potentials at once.

    Returns arrays of shape ``(n, 16, 16)``.  Matches :func:`tunneling_rates`
    followed by :func:`build_liouvillian` entry for entry; used by the time
    integrator and the sweep drivers.
    """
    table = _sideband_table(params, tol)
    levels = renormalized_levels(params)
    channels = _channel_superops()
    mus = {"L": np.atleast_1d(mu_L), "R": np.atleast_1d(mu_R)}
    out = {}
    for lead in LEADS:
        sums = [_sideband_sums(table, lvl, mus[lead], params.temperature) for lvl in levels]
        g = [lead_gamma(params, lead, dot) for dot in DOTS]
        ins = [g[i] * sums[i][0] for i in range(2)]
        outs = [g[i] * sums[i][1] for i in range(2)]
        if params.cross_coupling_mode == "collective":
            cross_o, cross_i = np.sqrt(outs[0] * outs[1]), np.sqrt(ins[0] * ins[1])
        else:
            cross_o = cross_i = np.zeros_like(ins[0])
        coeffs = np.stack([outs[0], outs[1], ins[0], ins[1], cross_o, cross_i], axis=-1)
        out[lead] = np.tensordot(coeffs, channels, axes=1)
    return out


class DrivenGenerator:
    """Time-dependent generator ``t -> L(t)`` for a bias protocol.

    Calling it gives a :class:`Liouvillian`; :meth:`matrices` and
    :meth:`lead_matrices` evaluate many times at once for the integrator.
    """

    def __init__(self, params: ModelParams, protocol: BiasProtocol, tol: float = DEFAULT_SIDEBAND_TOL):
        self.params = params
        self.protocol = protocol
        self.tol = tol
        self._coherent = coherent_superop(params) if params.coherent_term_enabled else None

    @property
    def period(self) -> float:
        return self.protocol.period

    def __call__(self, t: float) -> Liouvillian:
        return liouvillian_at(self.params, self.protocol, t, self.tol)

    def lead_matrices(self, times) -> dict[str, np.ndarray]:
        mu_L, mu_R = self.protocol.chemical_potentials(np.asarray(times, dtype=float))
        return lead_superops_batch(self.params, mu_L, mu_R, self.tol)

    def matrices(self, times) -> np.ndarray:
        parts = self.lead_matrices(times)
        total = parts["L"] + parts["R"]
        if self._coherent is not None:
            total = total + self._coherent
        return total
