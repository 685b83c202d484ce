"""Free boundary value problems solved as single backward initial value problems."""

from ._accel import BACKEND
from .convergence import ConvergenceRow, Reference, Study, observed_orders, run_study
from .core import (
    LinearResidual,
    ScalarFreeBVP,
    State2,
    SystemFreeBVP,
    VectorField,
    as_system,
    bc_residual,
    reduce_to_system,
)
from .errors import (
    DegenerateBoundary,
    EventNotFound,
    FreeBVPError,
    InfeasibleGeometry,
    NonFiniteState,
    ValidationError,
)
from .events import EventResult, locate_event
from .integrator import StepRecord, integrate_n, rk4_step
from .solver import Solution, SolverConfig, solve_scalar, solve_system

__version__ = "0.1.0"
