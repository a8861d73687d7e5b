"""Post-processing of sweep rows: steps, zero intervals, rebirth, periodicity.

Every helper drops flagged rows before computing anything.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "clean",
    "column",
    "cycle_deviation",
    "derivative_peaks",
    "discrete_derivative",
    "flattening_ratio",
    "oscillation_amplitude",
    "rebirth_pattern",
    "series_rows",
    "zero_intervals",
]

ZERO_TOL = 1e-10


def clean(rows):
    return [r for r in rows if not r.get("flag")]


def series_rows(rows, series: int):
    return [r for r in clean(rows) if r["series"] == series]


def column(rows, name: str) -> np.ndarray:
    return np.array([r[name] for r in clean(rows)], dtype=float)


def discrete_derivative(x, y) -> np.ndarray:
    x, y = np.asarray(x, float), np.asarray(y, float)
    return np.diff(y) / np.diff(x)


def derivative_peaks(x, y, rel_height: float = 0.2) -> np.ndarray:
    """Centres of local maxima of dy/dx that exceed ``rel_height`` of the largest one.

    Neighbouring maxima closer than a plateau are merged by requiring the
    derivative to drop below ``rel_height * max`` between two peaks.
    """
    d = discrete_derivative(x, y)
    xm = 0.5 * (np.asarray(x, float)[1:] + np.asarray(x, float)[:-1])
    if d.size == 0 or d.max() <= 0:
        return np.array([])
    above = d > rel_height * d.max()
    peaks = []
    i = 0
    while i < d.size:
        if above[i]:
            j = i
            while j < d.size and above[j]:
                j += 1
            k = i + int(np.argmax(d[i:j]))
            peaks.append(xm[k])
            i = j
        else:
            i += 1
    return np.array(peaks)


def zero_intervals(c, tol: float = ZERO_TOL) -> list[tuple[int, int]]:
    """Index ranges ``[start, stop)`` where ``c <= tol``."""
    zero = np.asarray(c, float) <= tol
    out, i = [], 0
    while i < zero.size:
        if zero[i]:
            j = i
            while j < zero.size and zero[j]:
                j += 1
            out.append((i, j))
            i = j
        else:
            i += 1
    return out


def rebirth_pattern(c, tol: float = ZERO_TOL) -> dict:
    """Classify a C(T) series: rise to a peak, death, then rebirth.

    ``rise``: the maximum before the first zero interval lies after the first
    point, so C grows before it decays.  ``death``: a zero interval follows a
    positive stretch.  ``rebirth``: positive values follow that interval.
    ``revival_max`` is the largest C after the first death (0 without rebirth).
    """
    c = np.asarray(c, float)
    positive = c > tol
    out = {"rise": False, "death": False, "rebirth": False, "revival_max": 0.0}
    if not positive.any():
        return out
    first = int(np.argmax(positive))
    after = ~positive[first:]
    dead = first + int(np.argmax(after)) if after.any() else c.size
    out["rise"] = int(np.argmax(c[:dead])) > first
    if dead == c.size:
        return out
    out["death"] = True
    tail = c[dead:]
    if (tail > tol).any():
        out["rebirth"] = True
        out["revival_max"] = float(tail.max())
    return out


def _by_cycle(rows, name):
    rows = clean(rows)
    cycles = np.array([r["cycle"] for r in rows])
    values = np.array([r[name] for r in rows], dtype=float)
    return cycles, values


def cycle_deviation(rows, name: str = "I") -> float:
    """Max |x(t) - x(t - period)| between the last two complete cycles."""
    cycles, values = _by_cycle(rows, name)
    last = cycles.max()
    a, b = values[cycles == last - 1], values[cycles == last - 2]
    n = min(a.size, b.size)
    if n == 0:
        return float("nan")
    return float(np.abs(a[:n] - b[:n]).max())


def oscillation_amplitude(rows, name: str = "I") -> float:
    """Half the peak-to-peak range over the last complete cycle."""
    cycles, values = _by_cycle(rows, name)
    v = values[cycles == cycles.max() - 1]
    return 0.5 * float(v.max() - v.min())


def flattening_ratio(V, C, top_fraction: float = 0.1, points: int = 200) -> float:
    """Mean |dC/dV| over the top ``top_fraction`` of the V range divided by max |dC/dV|.

    ``V`` must increase monotonically (one rising half cycle); the curve is
    resampled onto a uniform V grid first.
    """
    V, C = np.asarray(V, float), np.asarray(C, float)
    grid = np.linspace(V[0], V[-1], points)
    slope = np.abs(np.gradient(np.interp(grid, V, C), grid))
    top = grid >= V[-1] - top_fraction * (V[-1] - V[0])
    return float(slope[top].mean() / slope.max()) if slope.max() > 0 else 0.0
