"""Flat ``key = value`` configuration files and ``--set`` overrides.

Lines are ``key = value``; ``#`` starts a comment.  Keys are the field names
of :class:`~polaron_qdm.params.ModelParams`, :class:`~polaron_qdm.params.BiasProtocol`
and the sweep settings listed in :data:`SWEEP_KEYS`.  A ``series`` value is a
``;``-separated list of comma-separated overrides, e.g.
``series = g_ph=0,kappa=0; g_ph=0.1,kappa=0.262``.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ConfigError
from .params import BiasProtocol, ModelParams, mirrored_couplings

_BOOL = {"true": True, "1": True, "yes": True, "on": True,
         "false": False, "0": False, "no": False, "off": False}

MODEL_KEYS = {
    "eps_A": float, "eps_B": float, "t_AB": float, "g_ph": float,
    "T_AL": float, "T_AR": float, "T_BL": float, "T_BR": float,
    "temperature": float, "coherent_term_enabled": bool, "cross_coupling_mode": str,
}
COUPLING_KEYS = {"kappa": float, "T0": float, "sideband_tol": float}
BIAS_KEYS = {"V_dc": float, "V_ac": float, "omega_ac": float, "lever_split": float}
SWEEP_KEYS = {
    "sweep_min": float, "sweep_max": float, "sweep_count": int, "sweep_grid": "grid",
    "sweep_scale": str, "series": "series", "format": str,
    "cycles": int, "steps_per_cycle": int, "t_max": float, "discard_cycles": int,
    "step": float, "initial_state": str, "seed": int,
}
SERIES_KEYS = {**MODEL_KEYS, **COUPLING_KEYS, **BIAS_KEYS}
ALL_KEYS = {**SERIES_KEYS, **SWEEP_KEYS}


def _coerce_scalar(key: str, kind, raw: str):
    raw = raw.strip()
    try:
        if kind is bool:
            return _BOOL[raw.lower()]
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except (KeyError, ValueError):
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_series(raw: str) -> list[dict]:
    series = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        entry = {}
        for item in chunk.split(","):
            if "=" not in item:
                raise ConfigError(f"series entry {item!r} is not key=value")
            key, value = (s.strip() for s in item.split("=", 1))
            if key not in SERIES_KEYS:
                raise ConfigError(f"unknown key in series: {key}")
            entry[key] = _coerce_scalar(key, SERIES_KEYS[key], value)
        series.append(entry)
    if not series:
        raise ConfigError("series is empty")
    return series


def coerce(key: str, raw: str):
    """Typed value of ``key`` from its text form; unknown keys are rejected."""
    if key not in ALL_KEYS:
        raise ConfigError(f"unknown key: {key}")
    kind = ALL_KEYS[key]
    if kind == "series":
        return parse_series(raw)
    if kind == "grid":
        try:
            return [float(x) for x in raw.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return _coerce_scalar(key, kind, raw)


def parse_lines(lines, source: str = "<config>") -> dict:
    settings = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        settings[key] = coerce(key, value)
    return settings


def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_lines(text.splitlines(), str(path))


def parse_overrides(items) -> dict:
    settings = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        settings[key] = coerce(key, value)
    return settings


def build_model(settings: dict) -> ModelParams:
    """ModelParams from settings; ``kappa``/``T0`` fill couplings not given explicitly."""
    kwargs = {k: settings[k] for k in MODEL_KEYS if k in settings}
    if "kappa" in settings:
        T_AL, T_AR, T_BL, T_BR = mirrored_couplings(settings["kappa"], settings.get("T0", 1.0))
        for name, value in zip(("T_AL", "T_AR", "T_BL", "T_BR"), (T_AL, T_AR, T_BL, T_BR)):
            kwargs.setdefault(name, value)
    elif "T0" in settings:
        for name in ("T_AL", "T_AR", "T_BL", "T_BR"):
            kwargs.setdefault(name, settings["T0"])
    return ModelParams(**kwargs)


def build_protocol(settings: dict) -> BiasProtocol:
    return BiasProtocol(**{k: settings[k] for k in BIAS_KEYS if k in settings})
