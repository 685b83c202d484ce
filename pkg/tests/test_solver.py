import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freebvp.core import ScalarFreeBVP, SystemFreeBVP, VectorField, reduce_to_system
from freebvp.errors import DegenerateBoundary, EventNotFound, ValidationError
from freebvp.problems import make_dynamical, make_reactor, make_string
from freebvp.solver import SolverConfig, solve_scalar, solve_system


def affine_problem():
    # u'' = 0, u(s) = 1, u'(s) = -1, u(0) = 2  ->  u = 1 - (x - s), s = 1
    return ScalarFreeBVP(lambda u, du: 0.0, 1.0, 0.0, 2.0, 1.0, -1.0)


@pytest.mark.parametrize("dx", [-0.1, -0.3, -0.07, -1e-3, -1e-4, -0.5, -2.0])
def test_affine_problem_exact(dx):
    sol = solve_scalar(affine_problem(), SolverConfig(dx=dx))
    assert sol.s == pytest.approx(1.0, abs=1e-13)
    assert sol.u0 == pytest.approx(2.0, abs=1e-13)
    assert sol.du0 == -1.0


def test_string_table_last_row():
    sol = solve_scalar(make_string(), SolverConfig(dx=-0.0015625))
    assert sol.du0 == pytest.approx(-0.458257565, abs=2e-9)
    assert sol.s == pytest.approx(4.435682504, abs=2e-9)


def test_dynamical_table_last_row():
    sol = solve_scalar(make_dynamical(), SolverConfig(dx=-0.0001953125))
    assert sol.du0 == pytest.approx(3.253241934, abs=1e-9)
    assert sol.s == pytest.approx(0.871230929, abs=1e-9)
    assert sol.residual0 == pytest.approx(4.62e-8, rel=0.01)
    assert sol.u0 == sol.residual0


def test_reactor_table_last_row():
    sol = solve_scalar(make_reactor(), SolverConfig(dx=-0.0001953125))
    assert sol.u0 == pytest.approx(0.831274348, abs=1e-9)
    assert sol.du0 == pytest.approx(-1.012353814, abs=1e-9)
    assert sol.s == pytest.approx(5.119832299, abs=1e-9)


def test_trajectory_spans_free_boundary():
    p = make_reactor()
    sol = solve_scalar(p, SolverConfig(dx=-0.1, s_star=2.5))
    assert sol.x[0] == sol.s
    assert sol.x[-1] == 0.0
    assert np.array_equal(sol.states[0], [p.b_right, p.c_right])
    assert np.array_equal(sol.states[-1], sol.initial_state)
    assert sol.mu == pytest.approx(2.5 - sol.s)
    # uniform mesh except the shortened last step
    steps = np.diff(sol.x)
    assert np.allclose(steps[:-1], -0.1)
    assert -0.1 <= steps[-1] < 0
    assert len(sol.trajectory) == len(sol.x)


@settings(max_examples=25, deadline=None)
@given(st.floats(-50, 50))
def test_translation_invariance(s_star):
    base = solve_scalar(make_dynamical(), SolverConfig(dx=-0.0125))
    moved = solve_scalar(make_dynamical(), SolverConfig(dx=-0.0125, s_star=s_star))
    assert moved.s == pytest.approx(base.s, rel=1e-12)
    assert np.array_equal(moved.initial_state, base.initial_state)


def test_left_residual_converges():
    res = [abs(solve_scalar(make_reactor(), SolverConfig(dx=-0.1 / 2**i)).residual0) for i in range(10)]
    for a, b in zip(res, res[1:]):
        assert b < 2 * a
    orders = [math.log2(a / b) for a, b in zip(res, res[1:])]
    assert np.mean(orders[-3:]) >= 1.9


def test_degenerate_boundary_is_error():
    # terminal state already satisfies u = 1
    p = ScalarFreeBVP(lambda u, du: 0.0, 1.0, 0.0, 1.0, 1.0, 3.0)
    with pytest.raises(DegenerateBoundary):
        solve_scalar(p)


def test_unreachable_left_condition():
    p = ScalarFreeBVP(lambda u, du: 0.0, 1.0, 0.0, 2.0, 1.0, 1.0)
    with pytest.raises(EventNotFound):
        solve_scalar(p, SolverConfig(dx=-0.1, max_steps=1000))


@pytest.mark.parametrize("kwargs", [{"dx": 0.1}, {"dx": 0.0}, {"max_steps": 0}, {"s_star": math.inf}])
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        SolverConfig(**kwargs)


@pytest.mark.parametrize("dx", [-0.1, -0.013, -0.25])
def test_one_dimensional_system(dx):
    p = SystemFreeBVP(1, lambda y: np.array([-1.0]), 1, 1.0, (0.0,))
    sol = solve_system(p, SolverConfig(dx=dx))
    assert sol.s == pytest.approx(1.0, abs=1e-13)
    assert sol.initial_state[0] == pytest.approx(1.0, abs=1e-13)


def test_system_reduction_of_string_is_bitwise_identical():
    p = make_string()
    cfg = SolverConfig(dx=-0.05)
    a = solve_scalar(p, cfg)
    b = solve_system(reduce_to_system(p), cfg)
    assert a.s == b.s
    assert np.array_equal(a.states, b.states)


def test_dynamical_as_hand_built_system():
    field = VectorField(2, func=lambda y: np.array([y[1], -1.0 - y[0] - y[1] ** 2]))
    p = SystemFreeBVP(2, field, 1, 0.0, (1.0, 0.0))
    sol = solve_system(p, SolverConfig(dx=-0.0125))
    assert sol.s == pytest.approx(0.871172452, abs=1e-9)


def test_refined_event_meets_left_condition():
    sol = solve_scalar(make_dynamical(), SolverConfig(dx=-0.1, refine_event=True))
    assert abs(sol.residual0) < 1e-14
    # a converged event lands closer to the fine-step limit than one interpolation pass
    plain = solve_scalar(make_dynamical(), SolverConfig(dx=-0.1))
    fine = solve_scalar(make_dynamical(), SolverConfig(dx=-0.0001953125))
    assert abs(sol.s - fine.s) < abs(plain.s - fine.s)


def test_solution_immutable():
    sol = solve_scalar(affine_problem())
    with pytest.raises(AttributeError):
        sol.s = 3.0
