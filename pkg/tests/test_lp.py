import numpy as np
from numpy.testing import assert_allclose
import pytest

from subradius.errors import InvalidInputError
from subradius.lp import LpOptions, LpProblem, LpStatus, solve_lp

METHODS = ['simplex', 'highs']


@pytest.mark.parametrize('method', METHODS)
def test_textbook_maximization(method):
    p = LpProblem(objective=[-1.0, -1.0],
                  ineq_matrix=[[1.0, 2.0], [3.0, 1.0]],
                  ineq_rhs=[4.0, 6.0])
    out = solve_lp(p, LpOptions(method=method))
    assert out.is_optimal
    assert_allclose(out.solution, [1.6, 1.2], atol=1e-9)
    assert_allclose(out.objective_value, -2.8, atol=1e-9)


@pytest.mark.parametrize('method', METHODS)
def test_negative_rhs_needs_phase_one(method):
    # x + y >= 2, x <= 3, minimize 2x + y  ->  (0, 2)
    p = LpProblem(objective=[2.0, 1.0],
                  ineq_matrix=[[-1.0, -1.0], [1.0, 0.0]],
                  ineq_rhs=[-2.0, 3.0])
    out = solve_lp(p, LpOptions(method=method))
    assert out.is_optimal
    assert_allclose(out.solution, [0.0, 2.0], atol=1e-9)


def test_infeasible():
    p = LpProblem(objective=[1.0], ineq_matrix=[[1.0]], ineq_rhs=[-1.0])
    assert solve_lp(p).status is LpStatus.INFEASIBLE


def test_unbounded():
    p = LpProblem(objective=[-1.0, 0.0], ineq_matrix=[[0.0, 1.0]],
                  ineq_rhs=[1.0])
    assert solve_lp(p).status is LpStatus.UNBOUNDED


def test_free_and_boxed_variables():
    # minimize x - y with x free, -1 <= y <= 2, x >= y - 5
    p = LpProblem(objective=[1.0, -1.0],
                  ineq_matrix=[[-1.0, 1.0]],
                  ineq_rhs=[5.0],
                  lower_bounds=[-np.inf, -1.0],
                  upper_bounds=[np.inf, 2.0])
    out = solve_lp(p)
    assert out.is_optimal
    assert_allclose(out.objective_value, -5.0, atol=1e-9)
    assert out.solution[1] <= 2.0 + 1e-9


def test_upper_bound_only_variable():
    # maximize x with x <= 4 and no lower bound
    p = LpProblem(objective=[-1.0], ineq_matrix=np.zeros((0, 1)),
                  ineq_rhs=np.zeros(0), lower_bounds=[-np.inf],
                  upper_bounds=[4.0])
    out = solve_lp(p)
    assert out.is_optimal
    assert_allclose(out.solution, [4.0])


def test_crossed_bounds_are_infeasible():
    p = LpProblem(objective=[1.0], ineq_matrix=np.zeros((0, 1)),
                  ineq_rhs=np.zeros(0), lower_bounds=[2.0],
                  upper_bounds=[1.0])
    assert solve_lp(p).status is LpStatus.INFEASIBLE


def test_degenerate_problem_terminates():
    # many constraints through the optimal vertex
    a = np.array([[1.0, 1.0], [2.0, 2.0], [1.0, 0.0], [0.0, 1.0],
                  [3.0, 3.0]])
    p = LpProblem(objective=[-1.0, -1.0], ineq_matrix=a,
                  ineq_rhs=[1.0, 2.0, 1.0, 1.0, 3.0])
    out = solve_lp(p)
    assert out.is_optimal
    assert_allclose(out.objective_value, -1.0, atol=1e-9)


def test_agrees_with_highs_on_random_feasible_problems(rng):
    for _ in range(25):
        r, n = rng.integers(2, 7), rng.integers(2, 6)
        a = rng.normal(size=(r, n))
        x0 = rng.random(n)
        b = a @ x0 + rng.random(r)
        f = rng.normal(size=n)
        # box the variables so every problem is bounded
        p = LpProblem(objective=f,
                      ineq_matrix=np.vstack([a, np.eye(n)]),
                      ineq_rhs=np.concatenate([b, np.full(n, 10.0)]))
        ours = solve_lp(p)
        ref = solve_lp(p, LpOptions(method='highs'))
        assert ours.is_optimal and ref.is_optimal
        assert_allclose(ours.objective_value, ref.objective_value,
                        rtol=1e-7, atol=1e-7)


def test_problem_validation():
    with pytest.raises(InvalidInputError):
        LpProblem(objective=[1.0, 1.0], ineq_matrix=[[1.0, 1.0]],
                  ineq_rhs=[1.0, 2.0])
    with pytest.raises(InvalidInputError):
        LpProblem(objective=[np.nan], ineq_matrix=[[1.0]], ineq_rhs=[1.0])
    with pytest.raises(InvalidInputError):
        solve_lp(LpProblem([1.0], [[1.0]], [1.0]), LpOptions(method='cg'))


def test_iteration_cap():
    assert LpOptions().iteration_cap(10) == 300
    assert LpOptions().iteration_cap(1000) == 1000
    assert LpOptions(max_iter=7).iteration_cap(1000) == 7
