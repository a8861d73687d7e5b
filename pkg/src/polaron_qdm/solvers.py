"""Stationary states and time propagation of the vectorised master equation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateSteadyState,
    NoStationaryState,
    PositivityLoss,
    StepTooLarge,
    TraceDrift,
)
from .liouvillian import DIM, Liouvillian, unvec, vec

__all__ = [
    "Trajectory",
    "default_step",
    "propagator",
    "stationary_residual",
    "steady_state",
    "time_evolve",
]

DEGENERACY_THRESHOLD = 1e-8
RESIDUAL_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-8
POSITIVITY_FAIL = -1e-6
CONVERGENCE_TOL = 1e-7


def _as_matrix(L) -> np.ndarray:
    return L.matrix if isinstance(L, Liouvillian) else np.asarray(L)


def stationary_residual(L, rho: np.ndarray) -> float:
    return float(np.abs(_as_matrix(L) @ vec(rho)).max())


def steady_state(L) -> np.ndarray:
    """Unique stationary density matrix of ``L``.

    Taken from the right singular vector of the smallest singular value and
    normalised to unit trace.  Raises :class:`DegenerateSteadyState` when the
    two smallest singular values are both below 1e-8 and
    :class:`NoStationaryState` when the residual exceeds 1e-10.
    """
    M = _as_matrix(L)
    _, s, vh = np.linalg.svd(M)
    if s[-2] < DEGENERACY_THRESHOLD:
        raise DegenerateSteadyState(
            f"two smallest singular values {s[-2]:.3e}, {s[-1]:.3e} are below "
            f"{DEGENERACY_THRESHOLD:g}"
        )
    rho = unvec(vh[-1].conj())
    tr = np.trace(rho)
    if abs(tr) < 1e-14:
        raise NoStationaryState("null vector has vanishing trace")
    rho = rho / tr
    rho = 0.5 * (rho + rho.conj().T)
    residual = stationary_residual(M, rho)
    if residual > RESIDUAL_TOL:
        raise NoStationaryState(f"stationary residual {residual:.3e} exceeds {RESIDUAL_TOL:g}")
    min_eig = np.linalg.eigvalsh(rho)[0]
    if min_eig < -PSD_TOL:
        raise PositivityLoss(f"stationary state has eigenvalue {min_eig:.3e}")
    return rho


def propagator(L, dt: float) -> np.ndarray:
    """``exp(L dt)`` by scaling and squaring with Pade approximants."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    return scipy.linalg.expm(_as_matrix(L) * dt)


def default_step(norm_inf: float, period: float = math.inf) -> float:
    """``min(0.01 / ||L||_inf, period / 200)``."""
    step = 0.01 / norm_inf if norm_inf > 0 else math.inf
    return min(step, period / 200)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    trace_error: np.ndarray
    min_eigenvalue: np.ndarray
    step: float
    step_change: float = math.nan

    def __len__(self):
        return len(self.times)


def _generator_batch(L_of_t, times: np.ndarray) -> np.ndarray:
    batch = getattr(L_of_t, "matrices", None)
    if batch is not None:
        return np.asarray(batch(times))
    return np.array([_as_matrix(L_of_t(float(t))) for t in times])


class _Constant:
    def __init__(self, matrix):
        self.matrix = matrix

    def __call__(self, t):
        return self.matrix

    def matrices(self, times):
        return np.broadcast_to(self.matrix, (len(times),) + self.matrix.shape)


def _rk4_propagators(L1, L2, L3, h):
    """One classical RK4 step of ``y' = L(t) y`` as a matrix, batched."""
    eye = np.eye(L1.shape[-1])
    hh = h[..., None, None]
    A2 = L2 @ (eye + 0.5 * hh * L1)
    A3 = L2 @ (eye + 0.5 * hh * A2)
    A4 = L3 @ (eye + hh * A3)
    return eye + hh / 6.0 * (L1 + 2.0 * A2 + 2.0 * A3 + A4)


def _ordered_product(P: np.ndarray) -> np.ndarray:
    """``P[:, k-1] @ ... @ P[:, 0]`` for a stack of shape (m, k, d, d)."""
    while P.shape[1] > 1:
        tail = None
        if P.shape[1] % 2:
            tail, P = P[:, -1:], P[:, :-1]
        P = P[:, 1::2] @ P[:, 0::2]
        if tail is not None:
            P = np.concatenate([P, tail], axis=1)
    return P[:, 0]


def _interval_propagators(L_of_t, t_start, h, n):
    """Propagators over intervals starting at ``t_start`` with ``n`` RK4 steps of ``h``."""
    t0 = t_start[:, None] + h[:, None] * np.arange(n)
    hs = np.broadcast_to(h[:, None], t0.shape)
    flat_t, flat_h = t0.ravel(), hs.ravel()
    L1 = _generator_batch(L_of_t, flat_t)
    L2 = _generator_batch(L_of_t, flat_t + 0.5 * flat_h)
    L3 = _generator_batch(L_of_t, flat_t + flat_h)
    P = _rk4_propagators(L1, L2, L3, flat_h)
    norm = float(np.abs(L1).sum(axis=-1).max())
    return _ordered_product(P.reshape(t0.shape + P.shape[-2:])), norm


def _interval_stack(L_of_t, t_grid, counts, max_batch):
    """Propagator of every grid interval, shape (len(t_grid) - 1, d, d)."""
    spans = np.diff(t_grid)
    stack, norm = [], 0.0
    i, n_int = 0, len(spans)
    while i < n_int:
        n = counts[i]
        if n > max_batch:
            # one long interval: reduce it chunk by chunk
            h = spans[i] / n
            Q_total, done = None, 0
            while done < n:
                k = min(max_batch, n - done)
                Q, nm = _interval_propagators(
                    L_of_t, np.array([t_grid[i] + done * h]), np.array([h]), k
                )
                Q_total = Q[0] if Q_total is None else Q[0] @ Q_total
                norm = max(norm, nm)
                done += k
            stack.append(Q_total[None])
            i += 1
            continue
        j = i
        while j < n_int and counts[j] == n and (j - i + 1) * n <= max_batch:
            j += 1
        Q, nm = _interval_propagators(L_of_t, t_grid[i:j], spans[i:j] / n, n)
        stack.append(Q)
        norm = max(norm, nm)
        i = j
    return np.concatenate(stack), norm


def _grid_period(t_grid, period) -> int | None:
    """Intervals per drive period if the uniform grid tiles it exactly."""
    if not math.isfinite(period) or len(t_grid) < 3:
        return None
    spans = np.diff(t_grid)
    if np.abs(spans - spans[0]).max() > 1e-12 * spans[0]:
        return None
    m = round(period / spans[0])
    if m < 1 or abs(m * spans[0] - period) > 1e-9 * period or m >= len(spans):
        return None
    return m


def _integrate(L_of_t, y0, t_grid, step, max_batch=8192):
    spans = np.diff(t_grid)
    counts = np.maximum(1, np.ceil(spans / step - 1e-9).astype(int))
    m = _grid_period(t_grid, getattr(L_of_t, "period", math.inf))
    if m is not None:
        # the generator repeats every m intervals
        Q, norm = _interval_stack(L_of_t, t_grid[: m + 1], counts[:m], max_batch)
        Q = Q[np.arange(len(spans)) % m]
    else:
        Q, norm = _interval_stack(L_of_t, t_grid, counts, max_batch)
    out = np.empty((len(t_grid), y0.size), dtype=complex)
    out[0] = y = y0.astype(complex)
    for k in range(len(spans)):
        y = Q[k] @ y
        out[k + 1] = y
    return out, norm


def time_evolve(
    L_of_t: Callable[[float], Liouvillian] | Liouvillian,
    rho0: np.ndarray,
    t_grid,
    step: float,
    check_convergence: bool = True,
) -> Trajectory:
    """Fixed-step RK4 propagation of ``rho0`` reported on ``t_grid``.

    Every grid interval is split into equal substeps no longer than ``step``.
    With ``check_convergence`` the run is repeated at half the step and the
    snapshots must agree to ``1e-7 / max(1, ||L||_inf)`` entrywise, so that
    currents built from them change by less than 1e-7 as well.  The trace is
    never renormalised.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if isinstance(L_of_t, (Liouvillian, np.ndarray)):
        generator = _Constant(_as_matrix(L_of_t))
    else:
        generator = L_of_t
    y0 = vec(np.asarray(rho0, dtype=complex))

    ys, norm = _integrate(generator, y0, t_grid, step)
    change = math.nan
    if check_convergence and len(t_grid) > 1:
        ys_half, _ = _integrate(generator, y0, t_grid, 0.5 * step)
        change = float(np.abs(ys - ys_half).max())
        limit = CONVERGENCE_TOL / max(1.0, norm)
        if change > limit:
            raise StepTooLarge(
                f"halving the step changed the state by {change:.3e} (limit {limit:.3e})"
            )

    # column-stacked rows reshape to the transpose
    states = np.ascontiguousarray(ys.reshape(len(t_grid), DIM, DIM).transpose(0, 2, 1))
    traces = np.trace(states, axis1=1, axis2=2)
    trace_error = np.abs(traces - 1.0)
    herm = 0.5 * (states + np.conj(np.transpose(states, (0, 2, 1))))
    min_eig = np.linalg.eigvalsh(herm)[:, 0]
    bad = np.argmax(trace_error)
    if trace_error[bad] > TRACE_TOL:
        raise TraceDrift(f"trace drifted by {trace_error[bad]:.3e} at t={t_grid[bad]:g}")
    worst = np.argmin(min_eig)
    if min_eig[worst] < POSITIVITY_FAIL:
        raise PositivityLoss(f"eigenvalue {min_eig[worst]:.3e} at t={t_grid[worst]:g}")
    return Trajectory(t_grid, states, trace_error, min_eig, step, change)
