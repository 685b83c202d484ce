"""Hot loops: RK4 stepping and the backward march to a sign change.

Builtin right-hand sides are selected by an integer ``kind`` with a float
parameter vector so the compiled kernels stay module-level and cacheable.
Everything decorated with :func:`freebvp._accel.jit` is plain numpy when
numba is disabled. Fields given as arbitrary Python callables go through
:func:`march_callable`, which mirrors :func:`march_builtin` step for step.
"""

import numpy as np

from ._accel import jit
from .errors import NonFiniteState

# builtin second-order right-hand sides, reduced to (u, du) systems
STRING = 0  # params: theta
DYNAMICAL = 1  # params: unused
NA_VARIANT = 2  # params: unused
REACTOR = 3  # params: n_pe, r_rate, order_n

# march status codes
FOUND = 0
NOT_FOUND = 1
NONFINITE = 2
DEGENERATE = 3


@jit
def omega_builtin(kind, params, u, du):
    if kind == STRING:
        return params[0] * np.sqrt(1.0 + du * du)
    elif kind == DYNAMICAL:
        return -1.0 - u - du * du
    elif kind == NA_VARIANT:
        return -u * np.exp(-u)
    elif kind == REACTOR:
        return params[0] * (du + params[1] * u ** params[2])
    return np.nan


@jit
def rhs_builtin(kind, params, y):
    out = np.empty(2)
    out[0] = y[1]
    out[1] = omega_builtin(kind, params, y[0], y[1])
    return out


@jit
def rk4_increment_builtin(kind, params, y, h):
    k1 = rhs_builtin(kind, params, y)
    k2 = rhs_builtin(kind, params, y + (0.5 * h) * k1)
    k3 = rhs_builtin(kind, params, y + (0.5 * h) * k2)
    k4 = rhs_builtin(kind, params, y + h * k3)
    return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@jit
def rk4_builtin(kind, params, y, h):
    return y + rk4_increment_builtin(kind, params, y, h)


@jit
def compensated_add(y, comp, delta):
    """Kahan update of ``y += delta``; returns the new state and compensation."""
    d = delta - comp
    t = y + d
    return t, (t - y) - d


@jit
def linear_residual(weights, target, y):
    acc = 0.0
    for i in range(y.shape[0]):
        acc += weights[i] * y[i]
    return acc - target


@jit
def _all_finite(y):
    for i in range(y.shape[0]):
        if not np.isfinite(y[i]):
            return False
    return True


@jit
def march_builtin(kind, params, weights, target, y0, dx, max_steps, eps):
    """March ``y0`` with fixed step ``dx`` until the linear residual changes sign.

    Returns ``(status, k, traj, comp)`` where ``traj`` holds mesh states
    0..k and ``comp`` is the summation compensation carried at mesh point
    k-1. On FOUND, k is the first mesh index whose residual sign differs
    from the starting sign (zero counts as different). On NONFINITE, k is
    the failing step and ``traj`` stops before it.

    States are accumulated with compensated summation so that long runs do
    not drift by k rounding errors.
    """
    d = y0.shape[0]
    cap = min(max_steps + 1, 4096)
    traj = np.empty((cap, d))
    traj[0, :] = y0
    comp = np.zeros(d)
    r = linear_residual(weights, target, y0)
    if abs(r) <= eps:
        return DEGENERATE, 0, traj[:1], comp
    sigma = 1.0 if r > 0.0 else -1.0
    y = y0.copy()
    for k in range(1, max_steps + 1):
        comp_prev = comp
        y, comp = compensated_add(y, comp, rk4_increment_builtin(kind, params, y, dx))
        if not _all_finite(y):
            return NONFINITE, k, traj[:k], comp_prev
        if k == cap:
            cap = min(2 * cap, max_steps + 1)
            grown = np.empty((cap, d))
            grown[:k, :] = traj[:k, :]
            traj = grown
        traj[k, :] = y
        r = linear_residual(weights, target, y)
        if sigma * r <= 0.0:
            return FOUND, k, traj[: k + 1], comp_prev
    return NOT_FOUND, max_steps, traj[: max_steps + 1], comp


def march_callable(increment, residual, y0, dx, max_steps, eps):
    """Same contract as :func:`march_builtin` for a Python ``increment(y, h)``."""
    y = np.array(y0, dtype=float)
    comp = np.zeros_like(y)
    traj = [y]
    r = residual(y)
    if abs(r) <= eps:
        return DEGENERATE, 0, np.array(traj), comp
    sigma = 1.0 if r > 0.0 else -1.0
    for k in range(1, max_steps + 1):
        comp_prev = comp
        try:
            y, comp = compensated_add(y, comp, increment(y, dx))
        except NonFiniteState:
            return NONFINITE, k, np.array(traj), comp_prev
        if not np.all(np.isfinite(y)):
            return NONFINITE, k, np.array(traj), comp_prev
        traj.append(y)
        r = residual(y)
        if sigma * r <= 0.0:
            return FOUND, k, np.array(traj), comp_prev
    return NOT_FOUND, max_steps, np.array(traj), comp
