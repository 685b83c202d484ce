"""Fixed-step classical RK4 for autonomous fields of any dimension.

Backward integration is just a negative step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import VectorField
from .errors import NonFiniteState, ValidationError


@dataclass(frozen=True, eq=False)
class StepRecord:
    x: float
    state: np.ndarray


def _check(stage, index):
    if not np.all(np.isfinite(stage)):
        raise NonFiniteState(index)


def _rk4_increment_callable(f, y, h, index=None):
    k1 = np.asarray(f(y), dtype=float)
    _check(k1, index)
    k2 = np.asarray(f(y + (0.5 * h) * k1), dtype=float)
    _check(k2, index)
    k3 = np.asarray(f(y + (0.5 * h) * k2), dtype=float)
    _check(k3, index)
    k4 = np.asarray(f(y + h * k3), dtype=float)
    _check(k4, index)
    return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def incrementer(f):
    """Return ``increment(y, h)``, the RK4 update added to ``y``.

    Builtin fields use the compiled kernel and leave non-finite output to
    the caller's check; Python callables raise per stage.
    """
    if isinstance(f, VectorField) and f.builtin:
        kind, params = f.kind, f.params
        return lambda y, h: kernels.rk4_increment_builtin(kind, params, y, h)
    return lambda y, h: _rk4_increment_callable(f, y, h)


def stepper(f):
    """Return ``step(y, h)`` for a field, compiled when ``f`` is builtin."""
    if isinstance(f, VectorField) and f.builtin:
        kind, params = f.kind, f.params
        return lambda y, h: kernels.rk4_builtin(kind, params, y, h)
    increment = incrementer(f)
    return lambda y, h: y + increment(y, h)


def rk4_step(f, x, y, h):
    """One classical RK4 step of size ``h`` from state ``y``.

    ``x`` only labels the step; ``f`` takes the state alone. Raises
    :class:`NonFiniteState` if any stage or the result is not finite.
    """
    if h == 0:
        raise ValidationError("step size must be nonzero")
    y = np.asarray(y, dtype=float)
    _check(y, 0)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        out = stepper(f)(y, float(h))
    _check(out, 0)
    return out


def integrate_n(f, x0, y0, h, n):
    """Take ``n`` RK4 steps; returns ``n + 1`` records including the start.

    Record ``i`` sits at ``x0 + i*h``. A blow-up raises
    :class:`NonFiniteState` carrying the failing step index.
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if h == 0 and n > 0:
        raise ValidationError("step size must be nonzero")
    y = np.asarray(y0, dtype=float)
    _check(y, 0)
    step = stepper(f)
    records = [StepRecord(float(x0), y)]
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        for i in range(1, n + 1):
            try:
                y = step(y, float(h))
            except NonFiniteState:
                raise NonFiniteState(i) from None
            _check(y, i)
            records.append(StepRecord(x0 + i * h, y))
    return records
