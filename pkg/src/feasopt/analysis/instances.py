"""Random quadratic problems over polyhedra with a planted optimum."""
from __future__ import annotations

import numpy as np

from ..model import ConstraintFunction, ObjectiveFunction, Problem, SimpleSet


def random_spd(rng, n, log_cond=1.0):
    """Symmetric positive definite matrix with eigenvalues in ``[e^-c, e^c]``."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eig = np.exp(rng.uniform(-log_cond, log_cond, n))
    A = (Q * eig) @ Q.T
    return 0.5 * (A + A.T)


def random_polyhedral_instance(rng, n=None, m=None, log_cond=1.0, with_ball=True,
                               identity=False):
    """Quadratic objective, ``m`` affine constraints and a known optimum.

    A point ``x*`` and ``r <= min(m, n)`` active constraints through it are
    drawn first; the objective's linear term is then chosen so that
    ``-f'(x*)`` is a positive combination of the active normals, which makes
    ``x*`` optimal.  The remaining constraints have positive slack at ``x*``.
    The unconstrained minimizer is kept infeasible.

    With ``with_ball`` the set ``Q`` is a ball around ``x*`` whose diameter
    is the problem's ``R`` and which contains the unconstrained minimizer.
    """
    n = int(rng.integers(2, 11)) if n is None else n
    m = int(rng.integers(2, 21)) if m is None else m
    r = int(rng.integers(1, min(m, n) + 1))
    x_star = rng.standard_normal(n)
    normals = rng.standard_normal((m, n))
    b = normals @ x_star
    b[r:] += rng.uniform(0.1, 1.0, m - r)
    lam = rng.uniform(0.2, 1.5, r)
    grad_star = -(lam @ normals[:r])
    if identity:
        f = ObjectiveFunction.shifted_quadratic(x_star - grad_star)
    else:
        A = random_spd(rng, n, log_cond)
        f = ObjectiveFunction.general_quadratic(A, grad_star - A @ x_star)
    cons = [ConstraintFunction.affine(normals[j], b[j]) for j in range(m)]
    x_u = f.minimizer()
    radius = max(1.0, 1.05 * float(np.linalg.norm(x_u - x_star)))
    q = SimpleSet.ball(x_star, radius) if with_ball else SimpleSet.all_space()
    return Problem(f, cons, q, diameter=2 * radius, known_optimum=(x_star, f.value(x_star)))


def random_halfspace_pair_subproblem(rng, n=None):
    """Quadratic objective and two halfspaces whose intersection excludes the free minimizer."""
    from ..geometry import Halfspace

    n = int(rng.integers(2, 7)) if n is None else n
    A = random_spd(rng, n, 1.0)
    f = ObjectiveFunction.general_quadratic(A, rng.standard_normal(n))
    xu = f.minimizer()
    hs = []
    for _ in range(2):
        a = rng.standard_normal(n)
        hs.append(Halfspace(a, float(a @ xu) - rng.uniform(0.1, 1.0)))
    return f, hs[0], hs[1]
