import numpy as np
import pytest
from scipy.optimize import minimize

from feasopt import ConstraintFunction, Halfspace, ObjectiveFunction, Problem
from feasopt.analysis import (
    ModelProblemParams, NoRegularityParams, SequenceBoundParams, TwoHalfspaceParams,
    build_model_problem, estimate_kappa, fit_power_law, haugazeau_eps_bar, instrumented_family,
    lipschitz_estimates, lower_bound_fk, model_optimum, no_regularity_lower_step,
    project_power_set, random_polyhedral_instance, run_analyze_lower_bdd, run_no_regularity,
    run_two_halfspace, search_M2, seq_lower_bound, seq_upper_bound, two_halfspace_gamma,
    two_halfspace_problem, two_halfspace_recurrence, worst_case_sequence)
from feasopt.geometry import minimize_two_halfspaces, project_intersection


# -- lower-bound family --------------------------------------------------------


def test_model_problem_construction():
    p = build_model_problem(ModelProblemParams(2, 2, 1.0))
    assert p.m == 1
    np.testing.assert_array_equal(p.constraints[0].params["a"], [1.0, 1.0])
    q = build_model_problem(ModelProblemParams(7, 4, 0.5))
    assert all(g.params["a"][0] == 1.0 for g in q.constraints)
    assert all(g.value(np.zeros(7)) == 0.0 for g in q.constraints)
    assert q.kappa == pytest.approx(np.sqrt(1.25))


def test_params_validation():
    with pytest.raises(ValueError):
        ModelProblemParams(5, 3, 1.0)
    with pytest.raises(ValueError):
        ModelProblemParams(1, 2, 1.0)
    with pytest.raises(ValueError):
        TwoHalfspaceParams(np.pi / 2)
    with pytest.raises(ValueError):
        NoRegularityParams(0.5)
    assert ModelProblemParams(3, 4, 0.5).theta == 16.0


def test_closed_form_values():
    one = ModelProblemParams(11, 2, 1.0)
    assert lower_bound_fk(1, one) == pytest.approx(0.5)
    assert lower_bound_fk(4, one) == pytest.approx(0.8)
    assert lower_bound_fk(10 ** 9, one) == pytest.approx(1.0, abs=1e-8)


def test_closed_form_against_generic_minimizer():
    """Minimize the p-norm objective over k revealed halfspaces with a generic solver."""
    for p, eps, k in ((4, 1.0, 3), (4, 0.5, 2), (6, 1.0, 2)):
        params = ModelProblemParams(5, p, eps)
        n = params.n
        A = np.zeros((k, n))
        A[:, 0] = 1.0
        A[np.arange(k), np.arange(1, k + 1)] = eps
        e1 = np.eye(n)[0]
        res = minimize(lambda x: np.sum(np.abs(e1 - x) ** p), np.zeros(n), method="SLSQP",
                       constraints=[{"type": "ineq", "fun": lambda x: -A @ x}],
                       options={"ftol": 1e-14, "maxiter": 500})
        assert res.fun == pytest.approx(lower_bound_fk(k, params), abs=1e-6)


def test_model_optimum_attains_closed_form():
    params = ModelProblemParams(6, 4, 0.5)
    f = ObjectiveFunction.pnorm_shift(6, 4)
    for k in range(1, 6):
        assert f.value(model_optimum(k, params)) == pytest.approx(lower_bound_fk(k, params))


def test_reveal_sequence_examples():
    params = ModelProblemParams(6, 2, 1.0)
    np.testing.assert_allclose(run_analyze_lower_bdd(params), [0.5, 2 / 3, 0.75, 0.8, 5 / 6])
    np.testing.assert_allclose(run_analyze_lower_bdd(params, [4, 2, 5, 1, 3]),
                               [0.5, 2 / 3, 0.75, 0.8, 5 / 6])
    p4 = ModelProblemParams(6, 4, 1.0)
    expect = [lower_bound_fk(k, p4) for k in range(1, 6)]
    np.testing.assert_allclose(run_analyze_lower_bdd(p4, [3, 1, 5]), expect[:3], atol=1e-6)
    with pytest.raises(ValueError):
        run_analyze_lower_bdd(params, [1, 1])
    with pytest.raises(ValueError):
        run_analyze_lower_bdd(params, range(1, 8))


def test_instrumented_family_optimum():
    p = instrumented_family(m=30, eps=0.7, d1=1.5, d2=2.5)
    x, v = p.known_optimum
    # in the variables y = D^(1/2) x the objective is a squared distance to D^(1/2) e_1
    r = np.sqrt([1.5] + [2.5] * 30)
    hs = [Halfspace(g.params["a"] / r, 0.0) for g in p.constraints]
    y, _ = project_intersection(r * np.eye(31)[0], hs)
    np.testing.assert_allclose(y / r, x, atol=1e-12)
    assert p.objective.value(x) == pytest.approx(v)


# -- sequence bounds -----------------------------------------------------------


def test_sequence_bound_values():
    assert seq_upper_bound(1.0, 1.0, 1) == pytest.approx(0.5)
    assert seq_upper_bound(0.3, 2.0, 0) == pytest.approx(0.3)
    assert seq_lower_bound(1, 1, 0.5, 0) == pytest.approx(1.0)
    ks = np.arange(1, 100)
    assert np.all(np.diff(seq_lower_bound(ks, 2, 0.3, 5)) < 0)
    assert SequenceBoundParams(2.0, 0.5).eps_bar == pytest.approx(0.125)
    assert SequenceBoundParams(1.0, 2.0).admissible(0.4)
    assert not SequenceBoundParams(1.0, 2.0).admissible(0.5)


def test_worst_case_sequence_below_upper_bound():
    d = worst_case_sequence(0.8, 0.5, 100_000)
    assert np.all(d <= seq_upper_bound(0.8, 0.5, np.arange(d.size)) + 1e-15)


@pytest.mark.parametrize("p, gamma", [(1, 0.5), (2, 0.3), (3, 1.0)])
def test_lower_bound_recurrence_with_searched_M2(p, gamma):
    a = np.empty(100_000)
    a[0] = 0.5
    for k in range(a.size - 1):
        a[k + 1] = a[k] * (1 - gamma * a[k] ** p)
    M2 = search_M2(a, p, gamma)
    assert M2 is not None
    assert np.all(a >= seq_lower_bound(np.arange(1, a.size + 1), p, gamma, M2))


def test_eps_bar_readings_bracket_rederived():
    for g in (0.2, 1.0, 3.0):
        r = haugazeau_eps_bar(1.5, 2.0, g)
        assert r["A"] == pytest.approx(1.5 / (2 * 4 * g ** 3))
        assert r["B"] == pytest.approx(1.5 / (2 * 4 * g))
        assert min(r["A"], r["B"]) <= r["rederived"] + 1e-15


# -- two-halfspace wedge -------------------------------------------------------


def test_recurrence_values():
    assert two_halfspace_recurrence(0.0, 0.7) == 0.0
    assert two_halfspace_recurrence(0.1, np.pi / 4) == pytest.approx(
        0.1 * (np.sqrt(2) / 2 - 0.1) / (np.sqrt(2) / 2))
    with pytest.raises(ValueError):
        two_halfspace_recurrence(0.9, np.pi / 4)


def test_wedge_problem_geometry():
    t = np.pi / 4
    p = two_halfspace_problem(t)
    assert p.kappa == pytest.approx(np.sqrt(2))
    x = minimize_two_halfspaces(p.objective, *[
        Halfspace(g.params["a"], 0.0) for g in p.constraints])
    np.testing.assert_allclose(x, [0.0, 0.0], atol=1e-15)


def test_wedge_run_matches_recurrence_and_cosine_rule():
    t = np.pi / 4
    res = run_two_halfspace(t, 500)
    a = res["alpha"]
    np.testing.assert_allclose(a[1:], res["predicted"][1:], atol=1e-12)
    assert a[1] == pytest.approx(0.0858579, abs=1e-7)
    np.testing.assert_allclose(res["one_minus_f"], 2 * a * np.cos(t) - a ** 2, atol=1e-13)


def test_wedge_sandwich():
    t = np.pi / 3
    res = run_two_halfspace(t, 3000)
    a, k = res["alpha"], res["k"]
    gamma = two_halfspace_gamma(t, 0.1)
    assert np.all(a[1:] >= a[:-1] * (1 - gamma * a[:-1]) - 1e-15)
    M2 = search_M2(a, 1, gamma)
    assert M2 is not None
    eb = min(haugazeau_eps_bar(1.0, 1 / np.sin(t), 1.0).values())
    delta = res["one_minus_f"] / 2
    assert np.all(delta <= seq_upper_bound(delta[0], eb, k - 1) + 1e-15)


# -- no-regularity pair -------------------------------------------------------


def test_lower_step_values():
    assert no_regularity_lower_step(0.5, 1) == pytest.approx(0.0)
    assert no_regularity_lower_step(1e-4, 2) / 1e-4 == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        no_regularity_lower_step(1.0, 2)


def test_power_set_projection_against_brute_force(rng):
    s = np.linspace(-2, 2, 400_001)
    for p in (1.5, 2, 4):
        for _ in range(5):
            x = rng.uniform(-1.5, 1.5, 2)
            for sign in (1, -1):
                y = project_power_set(x, p, sign)
                assert sign * y[1] >= abs(y[0]) ** p - 1e-12
                curve = np.column_stack([s, sign * np.abs(s) ** p])
                best = np.min(np.linalg.norm(curve - x, axis=1))
                inside = sign * x[1] >= abs(x[0]) ** p
                assert np.linalg.norm(y - x) <= (0.0 if inside else best) + 1e-6


def test_no_regularity_run_p2():
    res = run_no_regularity(2, 2000)
    u, v = res["u"], res["v"]
    assert np.all(u[1:] >= res["bound"][1:])
    assert np.all(np.abs(v) <= np.abs(u) ** 2 + 1e-9)
    e, _ = fit_power_law(res["k"][100:], u[100:])
    assert e == pytest.approx(-1 / 3, rel=0.2)


def test_fit_power_law_exact():
    k = np.arange(1, 50)
    e, c = fit_power_law(k, 3.0 * k ** -0.4)
    assert e == pytest.approx(-0.4) and c == pytest.approx(3.0)


# -- regularity and instances ---------------------------------------------------


def test_kappa_single_halfspace():
    p = Problem(ObjectiveFunction.shifted_quadratic([1.0, 1.0]),
                [ConstraintFunction.affine([1.0, 2.0], 0.0)], diameter=2.0)
    assert estimate_kappa(p, samples=300) == pytest.approx(1.0)


def test_kappa_orthogonal_pair():
    p = Problem(ObjectiveFunction.shifted_quadratic([1.0, 1.0]),
                [ConstraintFunction.affine([1.0, 0.0], 0.0),
                 ConstraintFunction.affine([0.0, 1.0], 0.0)], diameter=2.0,
                known_optimum=([0.0, 0.0], 1.0))
    k = estimate_kappa(p, samples=5000)
    assert np.sqrt(2) * 0.99 <= k <= np.sqrt(2) + 1e-12


def test_kappa_model_family_finite():
    p = build_model_problem(ModelProblemParams(4, 2, 1.0))
    k = estimate_kappa(p, samples=2000)
    assert 1.0 <= k < np.inf


def test_kappa_needs_infeasible_samples():
    p = Problem(ObjectiveFunction.shifted_quadratic([0.0]),
                [ConstraintFunction.affine([1.0], 10.0)], diameter=1.0)
    with pytest.raises(ValueError):
        estimate_kappa(p, samples=50, center=[0.0])


def test_random_instance_optimum_is_kkt(rng):
    for _ in range(10):
        p = random_polyhedral_instance(rng)
        x, v = p.known_optimum
        A = p.objective.quadratic_form()[0]
        # the optimum is the projection of the free minimizer in the metric of A
        L = np.linalg.cholesky(A)
        hs = [Halfspace(np.linalg.solve(L, g.params["a"]), g.params["b"]) for g in p.constraints]
        y, _ = project_intersection(L.T @ p.objective.minimizer(), hs)
        np.testing.assert_allclose(np.linalg.solve(L.T, y), x, atol=1e-8)
        assert p.q.contains(p.objective.minimizer())


def test_lipschitz_estimates_quadratic():
    p = Problem(ObjectiveFunction.shifted_quadratic([1.0, 0.0]),
                [ConstraintFunction.affine([3.0, 4.0], 0.0)], diameter=2.0,
                known_optimum=([0.0, 0.0], 0.5))
    M1, M2 = lipschitz_estimates(p)
    assert M1 == pytest.approx(1.0 + 2.0) and M2 == pytest.approx(5.0)
