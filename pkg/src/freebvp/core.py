"""Problem classes, states and left-boundary residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import ValidationError


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class State2:
    """Value and slope ``(u, du/dx)`` at one abscissa."""

    u: float
    du: float

    def __post_init__(self):
        object.__setattr__(self, "u", _finite("u", self.u))
        object.__setattr__(self, "du", _finite("du", self.du))

    def as_array(self):
        return np.array([self.u, self.du])


@dataclass(frozen=True, eq=False)
class VectorField:
    """Autonomous first-order field ``y -> dy/dx``.

    Either ``func`` (any Python callable on a 1-D array) or a builtin
    ``kind`` from :mod:`freebvp.kernels` with its ``params`` must be given.
    Builtin fields run through the compiled kernels.
    """

    dim: int
    func: Callable | None = None
    kind: int | None = None
    params: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if (self.func is None) == (self.kind is None):
            raise ValidationError("VectorField needs exactly one of func or kind")
        if self.dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dim}")
        if self.kind is not None and self.dim != 2:
            raise ValidationError("builtin fields are two-dimensional")
        params = np.array(self.params, dtype=float).reshape(-1)
        params.setflags(write=False)
        object.__setattr__(self, "params", params)

    @property
    def builtin(self):
        return self.kind is not None

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind is not None:
            return kernels.rhs_builtin(self.kind, self.params, y)
        return np.asarray(self.func(y), dtype=float).reshape(self.dim)


@dataclass(frozen=True, eq=False)
class LinearResidual:
    """Residual ``weights . y - target`` of a linear left condition."""

    weights: np.ndarray
    target: float

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        if not np.all(np.isfinite(w)) or not np.any(w != 0.0):
            raise ValidationError("left condition weights must be finite and not all zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "target", _finite("target", self.target))

    @property
    def tolerance(self):
        """Absolute level below which a residual counts as zero."""
        return 1e-14 * (1.0 + abs(self.target))

    def __call__(self, y):
        acc = 0.0
        for w, v in zip(self.weights, np.asarray(y, dtype=float)):
            acc += w * v
        return float(acc - self.target)


@dataclass(frozen=True, eq=False)
class ScalarFreeBVP:
    """``u'' = omega(u, u')`` on (0, s) with

    ``a1*u(0) + a2*u'(0) = a3`` and ``u(s) = b_right``, ``u'(s) = c_right``.

    ``kind``/``params`` are set by the builtin constructors in
    :mod:`freebvp.problems` and route integration through compiled kernels;
    ``omega`` must agree with them.
    """

    omega: Callable[[float, float], float]
    a1: float
    a2: float
    a3: float
    b_right: float
    c_right: float
    name: str = "custom"
    kind: int | None = None
    params: tuple = ()

    def __post_init__(self):
        if not callable(self.omega):
            raise ValidationError("omega must be callable")
        for attr in ("a1", "a2", "a3", "b_right", "c_right"):
            object.__setattr__(self, attr, _finite(attr, getattr(self, attr)))
        if self.a1 == 0.0 and self.a2 == 0.0:
            raise ValidationError("left condition needs (a1, a2) != (0, 0)")
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))

    @property
    def terminal_state(self):
        return State2(self.b_right, self.c_right)

    def left_residual(self):
        return LinearResidual((self.a1, self.a2), self.a3)


@dataclass(frozen=True, eq=False)
class SystemFreeBVP:
    """``du/dx = q(u)`` in R^d with ``u_j(0) = u_j0`` and ``u(s) = u_s``.

    ``j_index`` counts from 1. ``left_weights`` generalises the left
    condition to ``w . u(0) = u_j0``; when omitted it is the unit vector of
    component ``j_index``.
    """

    dim: int
    q: Callable | VectorField
    j_index: int
    u_j0: float
    u_s: tuple
    left_weights: tuple | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dim}")
        if not 1 <= self.j_index <= self.dim:
            raise ValidationError(f"j_index must lie in 1..{self.dim}, got {self.j_index}")
        u_s = tuple(_finite("u_s component", v) for v in self.u_s)
        if len(u_s) != self.dim:
            raise ValidationError(f"u_s must have {self.dim} components, got {len(u_s)}")
        object.__setattr__(self, "u_s", u_s)
        object.__setattr__(self, "u_j0", _finite("u_j0", self.u_j0))
        if self.left_weights is not None:
            w = tuple(float(v) for v in self.left_weights)
            if len(w) != self.dim:
                raise ValidationError(f"left_weights must have {self.dim} components")
            object.__setattr__(self, "left_weights", w)
        q = self.q
        if not isinstance(q, VectorField):
            if not callable(q):
                raise ValidationError("q must be callable")
            q = VectorField(self.dim, func=q)
        elif q.dim != self.dim:
            raise ValidationError(f"field dimension {q.dim} != problem dimension {self.dim}")
        object.__setattr__(self, "q", q)

    def left_residual(self):
        if self.left_weights is None:
            w = np.zeros(self.dim)
            w[self.j_index - 1] = 1.0
        else:
            w = self.left_weights
        return LinearResidual(w, self.u_j0)


def bc_residual(p: ScalarFreeBVP, st) -> float:
    """Left-condition residual ``a1*u + a2*du - a3``; zero when it holds."""
    if isinstance(st, State2):
        u, du = st.u, st.du
    else:
        u, du = (float(v) for v in st)
    return p.a1 * u + p.a2 * du - p.a3


def as_system(p: ScalarFreeBVP) -> VectorField:
    """First-order reduction ``(u, du) -> (du, omega(u, du))``."""
    if p.kind is not None:
        return VectorField(2, kind=p.kind, params=p.params)
    omega = p.omega

    def rhs(y):
        return np.array([y[1], omega(y[0], y[1])], dtype=float)

    return VectorField(2, func=rhs)


def reduce_to_system(p: ScalarFreeBVP) -> SystemFreeBVP:
    """The scalar problem posed as a two-dimensional first-order system."""
    return SystemFreeBVP(
        dim=2,
        q=as_system(p),
        j_index=1,
        u_j0=p.a3,
        u_s=(p.b_right, p.c_right),
        left_weights=(p.a1, p.a2),
    )
