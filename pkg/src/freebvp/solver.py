"""Non-iterative transformation method driven by translation invariance.

An autonomous equation with free-boundary data at ``x = s`` is unchanged by
``x -> x + mu``. So the terminal data is imposed at an arbitrary ``s_star``,
the problem is integrated backwards until the left condition is met at
``x0_star``, and the translation ``mu = x0_star`` maps everything back:
``s = s_star - mu`` and the missing initial values are the state found at
``x0_star``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ScalarFreeBVP, SystemFreeBVP, reduce_to_system
from .errors import DegenerateBoundary, ValidationError
from .events import EventResult, locate_event


@dataclass(frozen=True)
class SolverConfig:
    """``dx`` is the signed backward step; it must be negative."""

    dx: float = -0.1
    s_star: float = 0.0
    max_steps: int = 10**6
    refine_event: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.dx) and self.dx < 0):
            raise ValidationError(f"dx must be negative for backward integration, got {self.dx}")
        if not math.isfinite(self.s_star):
            raise ValidationError(f"s_star must be finite, got {self.s_star}")
        if self.max_steps < 1:
            raise ValidationError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True, eq=False)
class Solution:
    """Result of one solve, in original coordinates.

    ``x`` runs from ``s`` down to ``0`` in integration order; ``states[i]``
    is the state at ``x[i]``. The last row is the event point reached by the
    shortened final step. ``residual0`` is the left-condition residual
    actually achieved there.
    """

    s: float
    mu: float
    initial_state: np.ndarray
    x: np.ndarray
    states: np.ndarray
    residual0: float
    event: EventResult

    @property
    def u0(self):
        return float(self.initial_state[0])

    @property
    def du0(self):
        return float(self.initial_state[1])

    @property
    def trajectory(self):
        return list(zip(self.x, self.states))


def solve_system(p: SystemFreeBVP, cfg: SolverConfig | None = None) -> Solution:
    """Solve ``du/dx = q(u)``, ``w . u(0) = u_j0``, ``u(s) = u_s`` for ``s`` and ``u(0)``."""
    cfg = cfg or SolverConfig()
    residual = p.left_residual()
    terminal = np.array(p.u_s, dtype=float)
    event = locate_event(
        p.q,
        residual,
        cfg.s_star,
        terminal,
        cfg.dx,
        max_steps=cfg.max_steps,
        refine=cfg.refine_event,
    )
    if event.degenerate:
        raise DegenerateBoundary(
            "terminal state already satisfies the left boundary condition; "
            "the free boundary would have zero length"
        )
    mu = event.x0_star
    return Solution(
        s=cfg.s_star - mu,
        mu=mu,
        initial_state=event.state_at_event,
        x=event.xs - mu,
        states=event.states,
        residual0=event.residual_at_event,
        event=event,
    )


def solve_scalar(p: ScalarFreeBVP, cfg: SolverConfig | None = None) -> Solution:
    """Solve a second-order free BVP through its first-order reduction.

    >>> from freebvp.problems import make_dynamical
    >>> sol = solve_scalar(make_dynamical(), SolverConfig(dx=-0.1))
    >>> round(sol.s, 9), round(sol.du0, 9)
    (0.867662139, 3.212263787)
    """
    return solve_system(reduce_to_system(p), cfg)
