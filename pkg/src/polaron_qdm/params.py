"""Physical parameters of the double-dot junction.

Units: hbar = k_B = e = 1.  Energies are measured in the phonon quantum
(omega_ph = 1), rates in Gamma_0 and currents in I_0 = e Gamma_0 / hbar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Literal

import numpy as np

from .errors import ConfigError, DecoupledDotError

__all__ = [
    "BiasProtocol",
    "ModelParams",
    "asymmetric_factor",
    "lead_gamma",
    "mirrored_couplings",
    "renormalized_levels",
]

DOTS = ("A", "B")
LEADS = ("L", "R")
CrossMode = Literal["collective", "local"]

OMEGA_PH = 1.0


@dataclass(frozen=True)
class ModelParams:
    eps_A: float = 2.0
    eps_B: float = 5.0
    t_AB: float = 0.0
    g_ph: float = 0.0
    T_AL: float = 1.0
    T_AR: float = 1.0
    T_BL: float = 1.0
    T_BR: float = 1.0
    temperature: float = 0.2
    coherent_term_enabled: bool = False
    cross_coupling_mode: CrossMode = "collective"

    def __post_init__(self):
        for name in ("eps_A", "eps_B", "t_AB", "g_ph", "temperature"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.temperature <= 0:
            raise ConfigError(f"temperature must be positive, got {self.temperature}")
        if self.g_ph < 0:
            raise ConfigError(f"g_ph must be non-negative, got {self.g_ph}")
        for dot in DOTS:
            for lead in LEADS:
                value = self.coupling(dot, lead)
                if not (math.isfinite(value) and value >= 0):
                    raise ConfigError(f"T_{dot}{lead} must be finite and >= 0, got {value}")
        if self.cross_coupling_mode not in ("collective", "local"):
            raise ConfigError(
                f"cross_coupling_mode must be 'collective' or 'local', "
                f"got {self.cross_coupling_mode!r}"
            )

    def coupling(self, dot: str, lead: str) -> float:
        return getattr(self, f"T_{dot}{lead}")

    @property
    def huang_rhys(self) -> float:
        return self.g_ph**2

    def is_degenerate(self) -> bool:
        """True when some dot is decoupled from both leads.

        The populations of such a dot are conserved, so the stationary state is
        not unique.
        """
        return any(
            self.coupling(dot, "L") == 0 and self.coupling(dot, "R") == 0 for dot in DOTS
        )

    def with_couplings(self, T_AL, T_AR, T_BL, T_BR) -> "ModelParams":
        return replace(self, T_AL=T_AL, T_AR=T_AR, T_BL=T_BL, T_BR=T_BR)

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class BiasProtocol:
    """Bias V(t) = V_dc + V_ac cos(omega_ac t), split between the leads.

    ``mu_L = lever_split * V`` and ``mu_R = -(1 - lever_split) * V`` so that
    ``mu_L - mu_R = V`` at every instant.
    """

    V_dc: float = 0.0
    V_ac: float = 0.0
    omega_ac: float = 1.0
    lever_split: float = 0.5

    def __post_init__(self):
        for name in ("V_dc", "V_ac", "omega_ac", "lever_split"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.V_ac != 0 and self.omega_ac <= 0:
            raise ConfigError("omega_ac must be positive for a harmonic bias")
        if not 0.0 <= self.lever_split <= 1.0:
            raise ConfigError(f"lever_split must lie in [0, 1], got {self.lever_split}")

    @property
    def is_dc(self) -> bool:
        return self.V_ac == 0

    @property
    def period(self) -> float:
        if self.is_dc:
            return math.inf
        return 2 * math.pi / self.omega_ac

    def voltage(self, t):
        """Bias at time ``t`` (scalar or array)."""
        if self.is_dc:
            return self.V_dc + np.zeros_like(np.asarray(t, dtype=float))
        return self.V_dc + self.V_ac * np.cos(self.omega_ac * np.asarray(t, dtype=float))

    def chemical_potentials(self, t=0.0):
        V = self.voltage(t)
        return self.lever_split * V, -(1.0 - self.lever_split) * V

    @classmethod
    def dc(cls, V: float, lever_split: float = 0.5) -> "BiasProtocol":
        return cls(V_dc=V, lever_split=lever_split)


def renormalized_levels(params: ModelParams) -> tuple[float, float]:
    """Polaron-shifted levels ``eps - g_ph**2 * omega_ph``."""
    shift = params.g_ph**2 * OMEGA_PH
    return params.eps_A - shift, params.eps_B - shift


def lead_gamma(params: ModelParams, lead: str, dot: str) -> float:
    """Wide-band tunnelling rate ``Gamma_{dot,lead} = |T_{dot,lead}|**2`` in Gamma_0."""
    if lead not in LEADS or dot not in DOTS:
        raise ConfigError(f"unknown lead/dot {lead!r}/{dot!r}")
    return params.coupling(dot, lead) ** 2


def asymmetric_factor(params: ModelParams) -> float:
    """Mean left-right coupling imbalance of the two dots, in [0, 1]."""
    kappas = []
    for dot in DOTS:
        left, right = params.coupling(dot, "L"), params.coupling(dot, "R")
        if left + right == 0:
            raise DecoupledDotError(f"dot {dot} is decoupled from both leads")
        kappas.append(abs(left - right) / (left + right))
    return 0.5 * (kappas[0] + kappas[1])


def mirrored_couplings(kappa: float, T0: float = 1.0) -> tuple[float, float, float, float]:
    """Couplings ``(T_AL, T_AR, T_BL, T_BR)`` with asymmetric factor ``kappa``.

    Dot A leans towards the left lead and dot B towards the right one; the
    lead-averaged coupling stays at ``T0`` for every ``kappa``.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ConfigError(f"kappa must lie in [0, 1], got {kappa}")
    if T0 <= 0:
        raise ConfigError(f"T0 must be positive, got {T0}")
    strong, weak = T0 * (1.0 + kappa), T0 * (1.0 - kappa)
    return strong, weak, weak, strong
