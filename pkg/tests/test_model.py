import json

import numpy as np
import pytest
from conftest import finite_difference

from feasopt import (ConstraintFunction, ObjectiveFunction, Problem, ProblemFormatError,
                     SimpleSet, eval_objective, gradient, load_problem, parse_problem,
                     serialize_problem, subgradient)
from feasopt.analysis import ModelProblemParams, build_model_problem
from feasopt.errors import DimensionError


# -- objective values and gradients ------------------------------------------


def test_objective_values_by_hand():
    assert eval_objective(ObjectiveFunction.shifted_quadratic([0, 0]), [0, 0]) == 0.0
    assert eval_objective(ObjectiveFunction.pnorm_shift(2, 2), [0, 0]) == 1.0
    assert eval_objective(ObjectiveFunction.shifted_quadratic([1, 0]), [0, 0]) == 0.5


def test_objective_gradients_by_hand():
    np.testing.assert_array_equal(gradient(ObjectiveFunction.shifted_quadratic([1, 0]), [0, 0]),
                                  [-1, 0])
    np.testing.assert_array_equal(gradient(ObjectiveFunction.pnorm_shift(2, 2), [0, 0]), [-2, 0])
    f = ObjectiveFunction.general_quadratic(np.eye(2), [0, 0])
    np.testing.assert_array_equal(gradient(f, [3, 4]), [3, 4])


@pytest.mark.parametrize("make", [
    lambda: ObjectiveFunction.shifted_quadratic([0.5, -1.0, 2.0]),
    lambda: ObjectiveFunction.general_quadratic([[2.0, 0.5, 0.0], [0.5, 1.0, 0.2],
                                                  [0.0, 0.2, 3.0]], [1.0, 0.0, -1.0]),
    lambda: ObjectiveFunction.general_quadratic(np.diag([1.0, 4.0, 9.0]), [0.0, 1.0, 0.0]),
    lambda: ObjectiveFunction.pnorm_shift(3, 4),
    lambda: ObjectiveFunction.pnorm_shift(3, 6),
])
def test_gradient_matches_finite_differences(make, rng):
    f = make()
    for _ in range(10):
        x = rng.standard_normal(3)
        fd = finite_difference(f.value, x)
        np.testing.assert_allclose(f.gradient(x), fd, rtol=1e-6, atol=1e-6)


def test_general_quadratic_constants_from_eigenvalues():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    f = ObjectiveFunction.general_quadratic(A, [0, 0])
    assert f.mu == pytest.approx(1.0) and f.lipschitz == pytest.approx(3.0)
    with pytest.raises(ValueError):
        ObjectiveFunction.general_quadratic(A, [0, 0], mu=0.5)
    with pytest.raises(ValueError):
        ObjectiveFunction.general_quadratic([[1.0, 0.0], [0.0, -1.0]], [0, 0])


def test_pnorm_flags():
    assert ObjectiveFunction.pnorm_shift(3, 4).mu is None
    assert not ObjectiveFunction.pnorm_shift(3, 4).strongly_convex
    f2 = ObjectiveFunction.pnorm_shift(3, 2)
    assert f2.mu == 2 and f2.lipschitz == 2
    with pytest.raises(ValueError):
        ObjectiveFunction.pnorm_shift(3, 3)


def test_strong_convexity_inequality(rng):
    A = np.array([[3.0, 1.0], [1.0, 2.0]])
    for f in (ObjectiveFunction.shifted_quadratic([1.0, 2.0]),
              ObjectiveFunction.general_quadratic(A, [1.0, -1.0]),
              ObjectiveFunction.pnorm_shift(2, 2)):
        for _ in range(50):
            x, y = 3 * rng.standard_normal(2), 3 * rng.standard_normal(2)
            lhs = f.value(y)
            rhs = f.value(x) + f.gradient(x) @ (y - x) + 0.5 * f.mu * np.sum((x - y) ** 2)
            assert lhs >= rhs - 1e-9


def test_minimizer_is_stationary():
    f = ObjectiveFunction.general_quadratic([[2.0, 0.3], [0.3, 1.0]], [1.0, -2.0])
    np.testing.assert_allclose(f.gradient(f.minimizer()), 0, atol=1e-12)


# -- constraints ---------------------------------------------------------------


def test_constraint_subgradients_by_hand():
    np.testing.assert_array_equal(subgradient(ConstraintFunction.affine([1, 0], 0), [5, -3]),
                                  [1, 0])
    ball = ConstraintFunction.dist_ball([0, 0], 1)
    np.testing.assert_allclose(subgradient(ball, [2, 0]), [1, 0])
    np.testing.assert_array_equal(subgradient(ball, [0.5, 0]), [0, 0])


def test_max_affine_picks_lowest_index_on_ties():
    g = ConstraintFunction.max_affine([[1.0], [2.0]], [0.0, 1.0])
    assert g.value([1.0]) == 1.0
    np.testing.assert_array_equal(g.subgradient([1.0]), [1.0])
    np.testing.assert_array_equal(g.subgradient([1.1]), [2.0])


@pytest.mark.parametrize("g", [
    ConstraintFunction.dist_halfspace([1.0, 2.0], 0.5),
    ConstraintFunction.dist_ball([1.0, 0.0], 0.7),
    ConstraintFunction.dist_box([-1.0, 0.0], [0.0, 2.0]),
])
def test_distance_kinds_match_projection(g, rng):
    for _ in range(30):
        x = 3 * rng.standard_normal(2)
        assert g.value(x) == pytest.approx(np.linalg.norm(x - g.project(x)), abs=1e-12)


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        ObjectiveFunction.shifted_quadratic([0, 0]).value([1, 2, 3])


# -- problem validation --------------------------------------------------------


def _simple():
    return Problem(ObjectiveFunction.shifted_quadratic([1.0, 0.0]),
                   [ConstraintFunction.affine([1.0, 0.0], 0.0)], diameter=2.0)


def test_problem_invariants():
    f = ObjectiveFunction.shifted_quadratic([1.0, 0.0])
    g = ConstraintFunction.affine([1.0, 0.0], 0.0)
    with pytest.raises(ProblemFormatError, match="diameter"):
        Problem(f, [g], diameter=0.0)
    with pytest.raises(ProblemFormatError, match="kappa"):
        Problem(f, [g], kappa=0.5)
    with pytest.raises(ProblemFormatError, match="constraints"):
        Problem(f, [])
    with pytest.raises(ProblemFormatError, match="optimum"):
        Problem(f, [g], known_optimum=([1.0, 0.0], 0.0))
    with pytest.raises(ProblemFormatError, match="q"):
        Problem(f, [g], q=SimpleSet.ball([0, 0, 0], 1.0))


def test_simple_set_projection():
    ball = SimpleSet.ball([0.0, 0.0], 2.0)
    np.testing.assert_allclose(ball.project([4.0, 0.0]), [2.0, 0.0])
    box = SimpleSet.box([0.0, 0.0], [1.0, 1.0])
    np.testing.assert_array_equal(box.project([2.0, -1.0]), [1.0, 0.0])
    assert SimpleSet.all_space().contains([1e9, -1e9])


# -- problem files -------------------------------------------------------------


def test_minimal_file_parses():
    text = json.dumps({"objective": {"kind": "shifted-quadratic", "center": [1, 0]},
                       "constraints": [{"kind": "affine", "a": [1, 0], "b": 0}],
                       "diameter": 2})
    p = parse_problem(text)
    assert p.m == 1 and p.dim == 2 and p.q.kind == "all-space"


def test_bad_diameter_names_field():
    text = json.dumps({"objective": {"kind": "shifted-quadratic", "center": [1, 0]},
                       "constraints": [{"kind": "affine", "a": [1, 0], "b": 0}],
                       "diameter": -1})
    with pytest.raises(ProblemFormatError) as exc:
        parse_problem(text)
    assert exc.value.field == "diameter"


@pytest.mark.parametrize("patch, field", [
    ({"constraints": [{"kind": "dist-ball", "center": [0, 0], "radius": -1}]},
     "constraints[0].radius"),
    ({"constraints": [{"kind": "affine", "a": [1, 0]}]}, "constraints[0].b"),
    ({"objective": {"kind": "cubic"}}, "objective.kind"),
    ({"extra": 1}, "extra"),
])
def test_malformed_entries_name_location(patch, field):
    data = {"objective": {"kind": "shifted-quadratic", "center": [1, 0]},
            "constraints": [{"kind": "affine", "a": [1, 0], "b": 0}], "diameter": 2}
    data.update(patch)
    with pytest.raises(ProblemFormatError) as exc:
        parse_problem(json.dumps(data))
    assert exc.value.field == field


def test_not_json_is_format_error():
    with pytest.raises(ProblemFormatError):
        parse_problem("objective: nope")


def test_model_problem_round_trip(tmp_path):
    p = build_model_problem(ModelProblemParams(6, 4, 0.5))
    path = tmp_path / "model.json"
    path.write_text(serialize_problem(p))
    assert load_problem(path) == p


def test_every_kind_round_trips():
    A = np.array([[2.0, 0.1], [0.1, 1.0]])
    p = Problem(ObjectiveFunction.general_quadratic(A, [0.1, 1 / 3]),
                [ConstraintFunction.affine([1.0, 0.0], 0.0),
                 ConstraintFunction.dist_halfspace([0.0, 1.0], 1.0),
                 ConstraintFunction.dist_ball([0.0, 0.0], 3.0),
                 ConstraintFunction.dist_box([-1.0, -1.0], [1.0, 1.0]),
                 ConstraintFunction.max_affine([[1.0, 1.0], [1.0, -1.0]], [1.0, 1.0])],
                q=SimpleSet.box([-5.0, -5.0], [5.0, 5.0]), diameter=10 * np.sqrt(2),
                kappa=1.5, known_optimum=([0.0, 0.0], 0.0))
    assert parse_problem(serialize_problem(p)) == p
