"""Builtin benchmark problems and their closed-form reference values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from . import kernels
from .core import ScalarFreeBVP
from .errors import InfeasibleGeometry, ValidationError


@dataclass(frozen=True)
class StringParams:
    """Heavy string lying on an obstacle.

    ``length_L`` and ``span_b`` only serve the feasibility check
    ``L**2 > u0**2 + b**2``; the equation itself never uses them.
    """

    theta: float = 0.1
    u0_target: float = 1.0
    length_L: float | None = None
    span_b: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValidationError(f"theta must be > 0, got {self.theta}")
        if not (math.isfinite(self.u0_target) and self.u0_target > 0):
            raise ValidationError(f"u0 must be > 0, got {self.u0_target}")
        if self.span_b is not None and not self.span_b > 0:
            raise ValidationError(f"span b must be > 0, got {self.span_b}")
        if self.length_L is not None and not self.length_L > 0:
            raise ValidationError(f"length L must be > 0, got {self.length_L}")


@dataclass(frozen=True)
class ReactorParams:
    """Axial-dispersion tubular reactor; defaults are the usual benchmark set."""

    n_pe: float = 6.0
    r_rate: float = 2.0
    order_n: float = 2.0
    tau: float = 0.1

    def __post_init__(self):
        if not (math.isfinite(self.n_pe) and self.n_pe > 0):
            raise ValidationError(f"N_Pe must be > 0, got {self.n_pe}")
        if not (math.isfinite(self.r_rate) and self.r_rate > 0):
            raise ValidationError(f"R must be > 0, got {self.r_rate}")
        if not math.isfinite(self.order_n):
            raise ValidationError(f"reaction order must be finite, got {self.order_n}")
        if not 0 < self.tau < 1:
            raise ValidationError(f"tau must lie in (0, 1), got {self.tau}")


class StringExact(NamedTuple):
    s_exact: float
    du0_exact: float
    u_eval: Callable[[float], float]


def make_string(p: StringParams | None = None) -> ScalarFreeBVP:
    """``u'' = theta*sqrt(1 + u'^2)``, ``u(0) = u0``, ``u(s) = u'(s) = 0``."""
    p = p or StringParams()
    if p.length_L is not None and p.span_b is not None:
        if p.length_L**2 <= p.u0_target**2 + p.span_b**2:
            raise InfeasibleGeometry(
                f"string too short: L^2 = {p.length_L**2:g} <= u0^2 + b^2 = "
                f"{p.u0_target**2 + p.span_b**2:g}"
            )
    theta = p.theta

    def omega(u, du):
        return theta * math.sqrt(1.0 + du * du)

    return ScalarFreeBVP(
        omega, 1.0, 0.0, p.u0_target, 0.0, 0.0,
        name="string", kind=kernels.STRING, params=(theta,),
    )


def string_exact(p: StringParams | None = None) -> StringExact:
    """Closed-form free boundary, initial slope and profile of the string problem."""
    p = p or StringParams()
    theta = p.theta
    a = theta * p.u0_target + 1.0
    s = math.log(a + math.sqrt(a * a - 1.0)) / theta

    def u_eval(x):
        return (math.cosh(theta * (x - s)) - 1.0) / theta

    return StringExact(s, math.sinh(-theta * s), u_eval)


def make_dynamical() -> ScalarFreeBVP:
    """Unit mass against the force ``-1 - u - u'^2``: ``u(0) = 0``, ``u(s) = 1``, ``u'(s) = 0``."""

    def omega(u, du):
        return -1.0 - u - du * du

    return ScalarFreeBVP(omega, 1.0, 0.0, 0.0, 1.0, 0.0, name="dynamical", kind=kernels.DYNAMICAL)


def make_na_variant() -> ScalarFreeBVP:
    """Same boundary data as :func:`make_dynamical` with force ``-u*exp(-u)``.

    This problem has countably many solutions; the solver returns the one
    met first when integrating back from ``s``.
    """

    def omega(u, du):
        return -u * math.exp(-u)

    return ScalarFreeBVP(omega, 1.0, 0.0, 0.0, 1.0, 0.0, name="na-variant", kind=kernels.NA_VARIANT)


def na_variant_slope_exact() -> float:
    # energy balance: du(0)**2 / 2 = integral of u*exp(-u) over [0, 1] = 1 - 2/e
    return math.sqrt(2.0 * (1.0 - 2.0 / math.e))


def make_reactor(p: ReactorParams | None = None) -> ScalarFreeBVP:
    """``u'' = N_Pe (u' + R u^n)``, ``u(0) - u'(0)/N_Pe = 1``, ``u(s) = tau``, ``u'(s) = 0``.

    With a non-integer order a negative ``u`` makes the power undefined and
    the solve fails with :class:`~freebvp.errors.NonFiniteState`.
    """
    p = p or ReactorParams()
    n_pe, r_rate, order_n = p.n_pe, p.r_rate, p.order_n

    def omega(u, du):
        try:
            power = u**order_n
        except ZeroDivisionError:
            return math.inf
        if isinstance(power, complex):
            return math.nan
        return n_pe * (du + r_rate * power)

    return ScalarFreeBVP(
        omega, 1.0, -1.0 / n_pe, 1.0, p.tau, 0.0,
        name="reactor", kind=kernels.REACTOR, params=(n_pe, r_rate, order_n),
    )
