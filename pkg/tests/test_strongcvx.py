import numpy as np
import pytest

from feasopt import ALL_SPACE, ConstraintFunction, Halfspace, ObjectiveFunction, Problem
from feasopt.analysis import (ModelProblemParams, build_model_problem, instrumented_family,
                              lower_bound_fk, random_halfspace_pair_subproblem)
from feasopt.errors import InnerIterationLimit, NotStronglyConvexError
from feasopt.geometry import minimize_two_halfspaces
from feasopt.strongcvx import (certificate, combine_halfspaces, performance_estimate,
                               projected_gradient_step, run_algorithm53, separating_halfspace)


def test_projected_gradient_fixed_point_at_optimum():
    f = ObjectiveFunction.shifted_quadratic([1.0, 0.0])
    np.testing.assert_allclose(projected_gradient_step(f, Halfspace([1, 0], 0), [0.0, 0.0]),
                               [0.0, 0.0])


def test_projected_gradient_exact_for_identity_hessian():
    f = ObjectiveFunction.shifted_quadratic([3.0, -1.0])
    np.testing.assert_allclose(projected_gradient_step(f, (ALL_SPACE, ALL_SPACE), [9.0, 9.0]),
                               [3.0, -1.0])


def test_contraction_for_diagonal_quadratic():
    f = ObjectiveFunction.general_quadratic(np.diag([1.0, 4.0]), [-2.0, 1.0])
    K = Halfspace([1.0, 1.0], 0.0)
    xs = minimize_two_halfspaces(f, K, method="exact")
    x = np.array([5.0, -7.0])
    for _ in range(50):
        y = projected_gradient_step(f, K, x)
        assert np.sum((y - xs) ** 2) <= 0.75 * np.sum((x - xs) ** 2) + 1e-12
        x = y


def test_callable_region():
    f = ObjectiveFunction.shifted_quadratic([2.0, 2.0])
    box = lambda y: np.clip(y, -1.0, 1.0)
    np.testing.assert_allclose(projected_gradient_step(f, box, [0.0, 0.0]), [1.0, 1.0])


def test_certificate_bounds_true_error(rng):
    for _ in range(10):
        f, h1, h2 = random_halfspace_pair_subproblem(rng)
        xs = minimize_two_halfspaces(f, h1, h2, method="exact")
        x = xs + rng.standard_normal(xs.size)
        for i in range(100):
            cert, y = certificate(f, (h1, h2), x, i)
            assert cert.err_bound + 1e-12 >= np.linalg.norm(x - xs)
            assert cert.err_bound == pytest.approx(f.lipschitz / f.mu * cert.residual)
            x = y


def test_separating_halfspace_by_hand():
    f = ObjectiveFunction.shifted_quadratic([0.0, 0.0])
    p = Problem(f, [ConstraintFunction.affine([1, 0], 0), ConstraintFunction.affine([1, 1], -5)])
    h = separating_halfspace(p, np.array([1.0, 0.0]))
    assert h == Halfspace([1.0, 1.0], -5.0)
    assert separating_halfspace(p, np.array([-9.0, 0.0])).is_all_space
    q = Problem(f, [ConstraintFunction.dist_ball([0, 0], 1)])
    h = separating_halfspace(q, np.array([3.0, 0.0]))
    np.testing.assert_allclose(h.normal, [1.0, 0.0])
    assert h.offset == pytest.approx(1.0)


def test_combine_halfspaces_cases():
    hp = Halfspace([1.0, 0.0], 1.0)
    assert combine_halfspaces(ALL_SPACE, hp, np.zeros(2), np.ones(2), 1, 1.0) is hp
    par = Halfspace([2.0, 0.0], 5.0)
    assert combine_halfspaces(par, hp, np.zeros(2), np.ones(2), 1, 1.0) is hp
    h = combine_halfspaces(Halfspace([1.0, 0.0], 0.0), Halfspace([0.0, 1.0], 0.0),
                           np.zeros(2), np.array([-1.0, -1.0]), 1, 1.0)
    np.testing.assert_allclose(h.normal / np.linalg.norm(h.normal), [1 / np.sqrt(2)] * 2)
    assert h.offset == pytest.approx(0.0)
    far = combine_halfspaces(Halfspace([1.0, 0.0], 0.0), hp, np.array([0.0, 5.0]),
                             np.ones(2), 10, 1.0)
    assert far is hp


def test_performance_estimate_by_hand():
    assert performance_estimate(0.0, 0.0, 1.0, 1.0, 1.0, 1.0) == (0.0, 0.0)
    gap, dist = performance_estimate(0.01, 0.1, 2.0, 1.0, 1.0, 1.0)
    assert gap == pytest.approx(0.22)
    assert dist == pytest.approx(0.01 + np.sqrt(0.42))
    with pytest.raises(ValueError):
        performance_estimate(0.0, 0.0, 0.5, 1.0, 1.0, 1.0)


def test_terminates_at_first_step_when_minimizer_feasible():
    p = Problem(ObjectiveFunction.shifted_quadratic([-1.0, 0.0]),
                [ConstraintFunction.affine([1.0, 0.0], 0.0)])
    tr = run_algorithm53(p, K=10)
    assert tr.converged and len(tr) == 1 and tr[0].dist == 0.0


def test_acceptance_conditions_hold_each_outer_step():
    p = instrumented_family(m=200)
    tr = run_algorithm53(p, alpha=1.0, K=100, instrument=True)
    for r in tr:
        assert r.err_bound <= 1.0 / r.k ** 2
        assert r.dist >= 2 * r.err_bound or r.step == "converged"
        assert r.err_bound + 1e-12 >= r.extra["true_err"]
        assert r.inner >= 1


def test_two_affine_constraints_reach_optimum():
    # both cuts are found after two outer steps, so the gap then stays at round-off
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    f = ObjectiveFunction.general_quadratic(A, [-4.0, -4.0])
    p = Problem(f, [ConstraintFunction.affine([1.0, 0.0], 0.0),
                    ConstraintFunction.affine([0.0, 1.0], 0.0)])
    tr = run_algorithm53(p, K=500)
    xs = np.zeros(2)
    np.testing.assert_allclose(tr.info["x_final"], xs, atol=1e-10)
    gap = f.value(xs) - tr.column("f")
    assert np.all(gap * tr.column("k") <= gap[0] + 1e-9)


def test_model_problem_value_approaches_closed_form():
    params = ModelProblemParams(6, 2, 1.0)
    p = build_model_problem(params)
    tr = run_algorithm53(p, K=200)
    assert tr.last.f == pytest.approx(lower_bound_fk(5, params), abs=1e-6)


def test_inner_cap_names_outer_iteration():
    p = instrumented_family(m=20)
    with pytest.raises(InnerIterationLimit) as exc:
        run_algorithm53(p, K=50, inner_cap=1)
    assert exc.value.outer >= 1
    assert f"outer iteration {exc.value.outer}" in str(exc.value)


def test_requires_strong_convexity():
    p = Problem(ObjectiveFunction.pnorm_shift(2, 4), [ConstraintFunction.affine([1.0, 1.0], 0.0)])
    with pytest.raises(NotStronglyConvexError):
        run_algorithm53(p)
    with pytest.raises(ValueError):
        run_algorithm53(instrumented_family(m=5), alpha=0.0)
