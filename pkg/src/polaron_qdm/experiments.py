"""Sweep drivers for the I-V, C-V, C-T and driven-trace experiments.

Each driver returns a list of row dictionaries with the columns in
:data:`COLUMNS`.  A point that fails keeps its inputs, gets ``None`` in the
output columns and an explanation in ``flag``; the sweep carries on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import build_model, build_protocol
from .errors import ConfigError, DecoupledDotError, SimulationError
from .liouvillian import DrivenGenerator, liouvillian_at
from .observables import concurrence, initial_state, lead_current, occupation
from .params import BiasProtocol, ModelParams, asymmetric_factor
from .solvers import default_step, stationary_residual, steady_state, time_evolve
from .special import DEFAULT_SIDEBAND_TOL

__all__ = [
    "COLUMNS",
    "DEFAULTS",
    "SweepSpec",
    "make_spec",
    "run",
    "run_ct",
    "run_cv",
    "run_iv",
    "run_steady",
    "run_trace",
]

KINDS = ("iv", "cv", "ct", "trace", "steady")

COLUMNS = (
    "kind", "series", "label", "index", "V", "mu_L", "mu_R", "t", "cycle",
    "eps_A", "eps_B", "t_AB", "g_ph", "kappa", "T_AL", "T_AR", "T_BL", "T_BR",
    "temperature", "cross_coupling_mode", "coherent_term_enabled",
    "V_dc", "V_ac", "omega_ac", "lever_split",
    "I", "I_L", "I_R", "C", "n_A", "n_B", "residual", "min_eig", "trace_err", "flag",
)

_COMMON = {"eps_A": 2.0, "eps_B": 5.0, "temperature": 0.2}

# Figure set-ups.  Sweep defaults: 400 grid points, traces 200 steps x 20 cycles.
DEFAULTS = {
    "iv": {
        "settings": {**_COMMON, "sweep_min": 0.0, "sweep_max": 16.0, "sweep_count": 400},
        "series": [
            {"g_ph": 0.0, "kappa": 0.0},
            {"g_ph": 0.1, "kappa": 0.262},
            {"g_ph": 0.2, "kappa": 0.262},
        ],
    },
    "cv": {
        "settings": {**_COMMON, "kappa": 0.55, "sweep_min": 0.0, "sweep_max": 16.0,
                     "sweep_count": 400},
        "series": [
            {"g_ph": 0.0, "temperature": 0.2},
            {"g_ph": 0.1, "temperature": 0.2},
            {"g_ph": 0.2, "temperature": 0.2},
            {"g_ph": 0.1, "temperature": 0.4},
            {"g_ph": 0.1, "temperature": 0.8},
        ],
    },
    "ct": {
        "settings": {**_COMMON, "kappa": 0.63, "V_dc": 0.1, "sweep_min": 0.02,
                     "sweep_max": 20.0, "sweep_count": 400, "sweep_scale": "log"},
        "series": [{"g_ph": g} for g in (0.0, 0.2, 0.25, 0.3)],
    },
    "trace": {
        "settings": {**_COMMON, "kappa": 0.58, "g_ph": 0.1, "V_dc": 1.0, "omega_ac": 4.0,
                     "cycles": 20, "steps_per_cycle": 200},
        "series": [{"V_ac": a} for a in (1.0, 2.0, 4.0)],
    },
    "steady": {"settings": {**_COMMON}, "series": [{}]},
}


@dataclass
class SweepSpec:
    kind: str
    settings: dict
    series: list[dict]
    grid: np.ndarray | None = None
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not self.series:
            raise ConfigError("series must not be empty")
        if self.grid is not None and len(self.grid) < 2:
            raise ConfigError("sweep grid needs at least 2 points")
        if not self.labels:
            self.labels = [_label(s) for s in self.series]

    def series_settings(self, i: int) -> dict:
        return {**self.settings, **self.series[i]}


def _label(overrides: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in overrides.items())


def _grid(settings: dict) -> np.ndarray:
    if "sweep_grid" in settings:
        return np.asarray(settings["sweep_grid"], dtype=float)
    lo, hi = settings["sweep_min"], settings["sweep_max"]
    count = settings["sweep_count"]
    if count < 2:
        raise ConfigError("sweep_count must be at least 2")
    scale = settings.get("sweep_scale", "linear")
    if scale == "linear":
        return np.linspace(lo, hi, count)
    if scale == "log":
        if lo <= 0:
            raise ConfigError("log sweep needs sweep_min > 0")
        return np.geomspace(lo, hi, count)
    raise ConfigError(f"sweep_scale must be 'linear' or 'log', got {scale!r}")


def make_spec(kind: str, user: dict | None = None) -> SweepSpec:
    """Merge user settings over the figure defaults of ``kind``.

    The default series are used only when the user gives no ``series`` and
    sets none of the keys those series vary; otherwise a single series is run
    from the merged settings.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    user = dict(user or {})
    default = DEFAULTS[kind]
    settings = {**default["settings"], **{k: v for k, v in user.items() if k != "series"}}
    if "series" in user:
        series = user["series"]
    else:
        varied = {k for s in default["series"] for k in s}
        explicit = {"kappa", "T_AL", "T_AR", "T_BL", "T_BR"} if "kappa" in varied else set()
        if varied & set(user) or explicit & set(user):
            series = [{}]
        else:
            series = [dict(s) for s in default["series"]]
    grid = None if kind in ("trace", "steady") else _grid(settings)
    return SweepSpec(kind, settings, series, grid)


def _echo(params: ModelParams, protocol: BiasProtocol) -> dict:
    try:
        kappa = asymmetric_factor(params)
    except DecoupledDotError:
        kappa = None
    row = {name: getattr(params, name) for name in ModelParams.field_names()}
    row["kappa"] = kappa
    row.update(V_dc=protocol.V_dc, V_ac=protocol.V_ac, omega_ac=protocol.omega_ac,
               lever_split=protocol.lever_split)
    return row


def _blank_row(kind, series, label, index) -> dict:
    row = dict.fromkeys(COLUMNS)
    row.update(kind=kind, series=series, label=label, index=index, flag="")
    return row


def _steady_row(kind, s, label, index, settings) -> dict:
    row = _blank_row(kind, s, label, index)
    params = build_model(settings)
    protocol = build_protocol(settings)
    row.update(_echo(params, protocol))
    mu_L, mu_R = protocol.chemical_potentials(0.0)
    row.update(V=float(protocol.voltage(0.0)), mu_L=float(mu_L), mu_R=float(mu_R))
    tol = settings.get("sideband_tol", DEFAULT_SIDEBAND_TOL)
    try:
        L = liouvillian_at(params, protocol, 0.0, tol)
        rho = steady_state(L)
        C = concurrence(rho)
    except SimulationError as exc:
        row["flag"] = f"{type(exc).__name__}: {exc}"
        return row
    I_L = lead_current(rho, L.lead_parts["L"])
    I_R = lead_current(rho, L.lead_parts["R"])
    row.update(
        I=0.5 * (I_L - I_R), I_L=I_L, I_R=I_R, C=C,
        n_A=occupation(rho, "A"), n_B=occupation(rho, "B"),
        residual=stationary_residual(L, rho),
        min_eig=float(np.linalg.eigvalsh(rho)[0]),
        trace_err=float(abs(np.trace(rho) - 1.0)),
    )
    return row


def _sweep(spec: SweepSpec, variable: str) -> list[dict]:
    rows = []
    for s in range(len(spec.series)):
        base = spec.series_settings(s)
        for i, x in enumerate(spec.grid):
            settings = {**base, variable: float(x)}
            rows.append(_steady_row(spec.kind, s, spec.labels[s], i, settings))
    return rows


def run_iv(spec: SweepSpec) -> list[dict]:
    """Stationary current against dc bias."""
    return _sweep(spec, "V_dc")


def run_cv(spec: SweepSpec) -> list[dict]:
    """Stationary concurrence against dc bias."""
    return _sweep(spec, "V_dc")


def run_ct(spec: SweepSpec) -> list[dict]:
    """Stationary concurrence against temperature at fixed bias."""
    return _sweep(spec, "temperature")


def run_steady(spec: SweepSpec) -> list[dict]:
    return [
        _steady_row(spec.kind, s, spec.labels[s], 0, spec.series_settings(s))
        for s in range(len(spec.series))
    ]


def _random_state(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = G @ G.conj().T
    return rho / np.trace(rho)


def _trace_rows(spec: SweepSpec, s: int) -> list[dict]:
    settings = spec.series_settings(s)
    params = build_model(settings)
    protocol = build_protocol(settings)
    tol = settings.get("sideband_tol", DEFAULT_SIDEBAND_TOL)
    steps = settings.get("steps_per_cycle", 200)
    if protocol.is_dc:
        t_max = settings.get("t_max", 50.0)
        times = np.linspace(0.0, t_max, settings.get("cycles", 20) * steps + 1)
        period = math.inf
    else:
        period = protocol.period
        cycles = settings.get("cycles", 20)
        times = np.arange(cycles * steps + 1) * (period / steps)
    generator = DrivenGenerator(params, protocol, tol)
    leads = generator.lead_matrices(times)
    norm = float(np.abs(generator.matrices(times[:: max(1, steps // 16)])).sum(axis=-1).max())
    step = settings.get("step") or default_step(norm, period)
    if settings.get("initial_state", "empty") == "random":
        rho0 = _random_state(settings.get("seed", 0))
    else:
        rho0 = initial_state()

    echo = _echo(params, protocol)
    V = protocol.voltage(times)
    mu_L, mu_R = protocol.chemical_potentials(times)
    try:
        traj = time_evolve(generator, rho0, times, step)
    except SimulationError as exc:
        row = _blank_row(spec.kind, s, spec.labels[s], 0)
        row.update(echo)
        row["flag"] = f"{type(exc).__name__}: {exc}"
        return [row]

    discard = settings.get("discard_cycles", 0)
    rows = []
    for i, t in enumerate(times):
        cycle = int(t // period) if math.isfinite(period) else 0
        if math.isfinite(period) and i < discard * steps:
            continue
        rho = traj.states[i]
        I_L = lead_current(rho, leads["L"][i])
        I_R = lead_current(rho, leads["R"][i])
        row = _blank_row(spec.kind, s, spec.labels[s], i)
        row.update(echo)
        row.update(
            V=float(V[i]), mu_L=float(mu_L[i]), mu_R=float(mu_R[i]), t=float(t),
            cycle=cycle, I=0.5 * (I_L - I_R), I_L=I_L, I_R=I_R,
            C=concurrence(0.5 * (rho + rho.conj().T)),
            n_A=occupation(rho, "A"), n_B=occupation(rho, "B"),
            min_eig=float(traj.min_eigenvalue[i]), trace_err=float(traj.trace_error[i]),
        )
        rows.append(row)
    return rows


def run_trace(spec: SweepSpec) -> list[dict]:
    """Time evolution from the empty state under the (harmonic) bias.

    Each row carries ``V(t)`` and ``cycle`` next to ``I(t)`` and ``C(t)``, so
    the per-cycle (V, I) and (V, C) parametric curves are a filter on
    ``cycle``.
    """
    rows = []
    for s in range(len(spec.series)):
        rows.extend(_trace_rows(spec, s))
    return rows


_RUNNERS = {"iv": run_iv, "cv": run_cv, "ct": run_ct, "trace": run_trace, "steady": run_steady}


def run(spec: SweepSpec) -> list[dict]:
    return _RUNNERS[spec.kind](spec)
