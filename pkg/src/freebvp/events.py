"""Event location during fixed-step backward integration.

The march stops at the first mesh point whose left-condition residual has
left the sign it started with. The last step is then retaken from the
previous mesh point with a shorter step chosen by linear interpolation of
the residual, so the located abscissa lies inside the bracketing interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import LinearResidual, VectorField
from .errors import EventNotFound, NonFiniteState, ValidationError
from .integrator import incrementer

_REFINE_MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class EventResult:
    """Where the left condition was met.

    ``k`` is the first mesh index past the crossing and ``dx0_star`` the
    signed length of the final, shortened step measured from mesh point
    ``k - 1``. ``xs``/``states`` hold mesh points ``0..k-1`` followed by the
    event point. ``degenerate`` means the start already satisfied the
    condition and nothing was integrated.
    """

    x0_star: float
    state_at_event: np.ndarray
    k: int
    dx0_star: float
    residual_at_event: float
    xs: np.ndarray
    states: np.ndarray
    degenerate: bool = False
    refine_iterations: int = 0


def _as_field(f, dim):
    if isinstance(f, VectorField):
        return f
    return VectorField(dim, func=f)


def locate_event(
    f,
    residual,
    x_start,
    y_start,
    dx,
    max_steps=10**6,
    refine=False,
    tol=None,
):
    """Integrate from ``(x_start, y_start)`` with step ``dx`` to the first residual sign change.

    Parameters
    ----------
    f : VectorField or callable
        Autonomous field ``y -> dy/dx``.
    residual : LinearResidual or callable
        Left-condition residual of a state. Linear residuals on builtin
        fields use the compiled march.
    dx : float
        Signed step; negative for backward integration.
    refine : bool
        After the interpolated step, keep shrinking the bracket by
        regula falsi until ``|residual| <= tol``. Off by default.
    tol : float, optional
        Zero threshold for the residual. Defaults to
        ``1e-14 * (1 + |target|)`` for linear residuals and ``1e-14``
        otherwise.

    Raises
    ------
    EventNotFound
        No sign change within ``max_steps`` steps.
    NonFiniteState
        The trajectory blew up before the crossing.
    """
    if dx == 0 or not math.isfinite(dx):
        raise ValidationError(f"step size must be finite and nonzero, got {dx}")
    if max_steps < 1:
        raise ValidationError(f"max_steps must be >= 1, got {max_steps}")
    y0 = np.array(y_start, dtype=float).reshape(-1)
    field = _as_field(f, y0.shape[0])
    r_start = residual(y0)
    if not math.isfinite(r_start):
        raise ValidationError(f"starting residual is not finite: {r_start}")
    if tol is None:
        tol = residual.tolerance if isinstance(residual, LinearResidual) else 1e-14
    x_start = float(x_start)
    dx = float(dx)
    increment = incrementer(field)

    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        if field.builtin and isinstance(residual, LinearResidual):
            status, k, traj, comp = kernels.march_builtin(
                field.kind, field.params, residual.weights, residual.target,
                y0, dx, int(max_steps), tol,
            )
        else:
            status, k, traj, comp = kernels.march_callable(
                increment, residual, y0, dx, int(max_steps), tol
            )

        if status == kernels.DEGENERATE:
            return EventResult(
                x0_star=x_start,
                state_at_event=y0,
                k=0,
                dx0_star=0.0,
                residual_at_event=r_start,
                xs=np.array([x_start]),
                states=y0[np.newaxis, :].copy(),
                degenerate=True,
            )
        if status == kernels.NOT_FOUND:
            raise EventNotFound(max_steps)
        if status == kernels.NONFINITE:
            raise NonFiniteState(k)

        traj = np.array(traj)
        x_prev = x_start + (k - 1) * dx
        y_prev = traj[k - 1]
        r_prev = residual(y_prev)
        r_k = residual(traj[k])
        iterations = 0
        if r_k == 0.0:
            dx0 = dx
            y_event = traj[k]
            r_event = r_k
        else:
            dx0 = dx * (-r_prev) / (r_k - r_prev)
            y_event, comp_event = _final_step(increment, y_prev, comp, dx0, k)
            r_event = residual(y_event)
            if refine:
                dx0, y_event, r_event, iterations = _regula_falsi(
                    increment, residual, (y_prev, comp, r_prev), (dx, r_k),
                    (dx0, y_event, comp_event, r_event), tol, k,
                )

    x0_star = x_prev + dx0
    xs = x_start + dx * np.arange(k, dtype=float)
    return EventResult(
        x0_star=x0_star,
        state_at_event=y_event,
        k=k,
        dx0_star=dx0,
        residual_at_event=float(r_event),
        xs=np.append(xs, x0_star),
        states=np.vstack([traj[:k], y_event]),
        refine_iterations=iterations,
    )


def _final_step(increment, y, comp, h, k):
    try:
        delta = increment(y, h)
    except NonFiniteState:
        raise NonFiniteState(k) from None
    out, comp = kernels.compensated_add(y, comp, np.asarray(delta, dtype=float))
    if not np.all(np.isfinite(out)):
        raise NonFiniteState(k)
    return out, comp


def _regula_falsi(increment, residual, left, right, trial, tol, k):
    # offsets are measured from mesh point k-1; every trial is one RK4 step
    # from the current left end of the bracket
    a_y, a_comp, a_r = left
    a_off = 0.0
    b_off, b_r = right
    off, y_event, comp_event, r_event = trial
    iterations = 0
    while abs(r_event) > tol and iterations < _REFINE_MAX_ITER:
        if (r_event > 0.0) == (a_r > 0.0):
            a_off, a_y, a_comp, a_r = off, y_event, comp_event, r_event
        else:
            b_off, b_r = off, r_event
        h = (b_off - a_off) * (-a_r) / (b_r - a_r)
        if h == 0.0:
            break
        y_event, comp_event = _final_step(increment, a_y, a_comp, h, k)
        r_event = residual(y_event)
        off = a_off + h
        iterations += 1
    return off, y_event, r_event, iterations
