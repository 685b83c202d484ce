"""Step-halving refinement studies and observed convergence orders."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .core import ScalarFreeBVP
from .errors import FreeBVPError, InfiniteOrder, ValidationError
from .solver import SolverConfig, solve_scalar

SELF = "self"


@dataclass(frozen=True)
class Reference:
    du0: float
    s: float
    note: str = ""
    self_referenced: bool = False


@dataclass(frozen=True)
class ConvergenceRow:
    dx: float
    u0: float
    du0: float
    s: float
    residual0: float
    e_r_du0: float | None = None
    e_r_s: float | None = None


@dataclass(frozen=True)
class Study:
    label: str
    rows: tuple
    reference: Reference | None = None

    def column(self, name):
        return [getattr(row, name) for row in self.rows]


def _rel(value, ref):
    return abs(value - ref) / abs(ref)


def _solve_level(p, cfg, level):
    try:
        sol = solve_scalar(p, cfg)
    except FreeBVPError as err:
        err.level = level
        raise
    return ConvergenceRow(cfg.dx, sol.u0, sol.du0, sol.s, sol.residual0)


def run_study(
    p: ScalarFreeBVP,
    dx_start: float = -0.1,
    levels: int = 7,
    reference: Reference | str | None = None,
    config: SolverConfig | None = None,
    workers: int | None = None,
) -> Study:
    """Solve at ``dx_start * 2**-i`` for ``i < levels``.

    ``reference`` may be a :class:`Reference`, ``"self"`` to measure every
    level against the finest one, or ``None`` for no error columns.
    ``workers > 1`` runs the levels in a thread pool; rows keep level order.
    """
    if not (math.isfinite(dx_start) and dx_start < 0):
        raise ValidationError(f"dx_start must be negative, got {dx_start}")
    if levels < 1:
        raise ValidationError(f"levels must be >= 1, got {levels}")
    base = config or SolverConfig(dx=dx_start)
    configs = [replace(base, dx=dx_start / 2**i) for i in range(levels)]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_solve_level, p, cfg, i) for i, cfg in enumerate(configs)]
            rows = [f.result() for f in futures]
    else:
        rows = [_solve_level(p, cfg, i) for i, cfg in enumerate(configs)]

    if reference == SELF:
        finest = rows[-1]
        reference = Reference(
            finest.du0, finest.s,
            note=f"self-referenced to dx = {finest.dx:g}",
            self_referenced=True,
        )
    elif isinstance(reference, str):
        raise ValidationError(f"unknown reference {reference!r}")
    if reference is not None:
        rows = [
            replace(row, e_r_du0=_rel(row.du0, reference.du0), e_r_s=_rel(row.s, reference.s))
            for row in rows
        ]
    return Study(p.name, tuple(rows), reference)


def orders_from_errors(errors):
    """``log2(e[i] / e[i+1])`` for consecutive pairs of errors."""
    errors = [float(e) for e in errors]
    orders = []
    for i, (a, b) in enumerate(zip(errors, errors[1:])):
        if a == 0.0 or b == 0.0:
            raise InfiniteOrder(f"error {i + (b == 0.0)} is exactly zero")
        elif a == b:
            orders.append(0.0)
        else:
            orders.append(math.log2(a / b))
    return orders


def observed_orders(study: Study, field: str = "s"):
    """Observed orders of the relative error in ``field`` ("s" or "du0").

    Rows of a self-referenced study are compared against the finest level,
    whose own error is zero; that row is left out.
    """
    if study.reference is None:
        raise ValidationError("observed orders need a study with a reference")
    if field not in ("s", "du0"):
        raise ValidationError(f"field must be 's' or 'du0', got {field!r}")
    if len(study.rows) < 3:
        raise ValidationError("observed orders need at least three rows")
    rows = study.rows[:-1] if study.reference.self_referenced else study.rows
    return orders_from_errors(getattr(row, f"e_r_{field}") for row in rows)
