"""Exception hierarchy shared across the package."""


class FreeBVPError(Exception):
    """Base class for all errors raised by freebvp.

    ``level`` is filled in by convergence studies to name the refinement
    level that failed.
    """

    level = None

    def __str__(self):
        msg = super().__str__()
        if self.level is not None:
            msg = f"{msg} (refinement level {self.level})"
        return msg


class ValidationError(FreeBVPError, ValueError):
    """A problem, parameter set or configuration violates its invariants."""


class InfeasibleGeometry(ValidationError):
    """String length too short for a free boundary: L**2 <= u0**2 + b**2."""


class NoClosedForm(FreeBVPError):
    """The requested problem has no closed-form reference values."""


class SolverError(FreeBVPError):
    """The backward integration could not produce a solution."""


class NonFiniteState(SolverError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"non-finite state produced at step {index}")


class EventNotFound(SolverError):
    def __init__(self, max_steps):
        self.max_steps = max_steps
        super().__init__(
            f"left boundary condition not crossed within {max_steps} steps"
        )


class DegenerateBoundary(SolverError):
    """Terminal data already satisfies the left condition, giving s = 0."""


class InfiniteOrder(FreeBVPError, ZeroDivisionError):
    """An error of exactly zero makes the observed order infinite."""
