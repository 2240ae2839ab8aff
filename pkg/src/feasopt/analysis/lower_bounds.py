"""The p-norm lower-bound family and the constraint-revealing experiment.

The model problem is ``min ||e_1 - x||_p^p`` subject to
``<e_1 + eps * e_{j+1}, x> <= 0`` for ``j = 1..n-1``.  Revealing ``k`` of the
constraints gives the optimal value
``f_k = k*theta / (1 + (k*theta)**(1/(p-1)))**(p-1)`` with ``theta = eps**-p``,
so any method that learns one constraint per iteration is at best
``O(k**(-1/(p-1)))`` away from the optimal value.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..geometry import Halfspace, project_intersection
from ..model import ConstraintFunction, ObjectiveFunction, Problem


@dataclass(frozen=True)
class ModelProblemParams:
    n: int
    p: int = 2
    eps: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if int(self.p) != self.p or self.p < 2 or int(self.p) % 2:
            raise ValueError("p must be a positive even integer")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def theta(self):
        return self.eps ** (-self.p)


def lower_bound_fk(k, params):
    """Optimal value with ``k`` of the constraints present."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 0.0
    p = params.p
    t = k * params.theta
    return t / (1.0 + t ** (1.0 / (p - 1))) ** (p - 1)


def model_optimum(k, params):
    """Minimizer with constraints ``1..k`` present: ``(alpha, -alpha/eps, ..., 0, ...)``."""
    p, t = params.p, k * params.theta
    alpha = 1.0 / (1.0 + t ** (1.0 / (p - 1)))
    x = np.zeros(params.n)
    x[0] = alpha
    x[1:k + 1] = -alpha / params.eps
    return x


def build_model_problem(params):
    """The model problem with all ``n - 1`` constraints.

    ``kappa = sqrt(1 + eps**2)``: shifting any point along ``-e_1`` by the
    largest constraint value lands in the feasible set, and every unit
    normal has inner product ``1/sqrt(1 + eps**2)`` with ``e_1``.
    """
    n, eps = params.n, params.eps
    cons = []
    for j in range(1, n):
        a = np.zeros(n)
        a[0], a[j] = 1.0, eps
        cons.append(ConstraintFunction.affine(a, 0.0))
    opt = (model_optimum(n - 1, params), lower_bound_fk(n - 1, params))
    return Problem(ObjectiveFunction.pnorm_shift(n, params.p), cons, diameter=2.0,
                   kappa=float(np.sqrt(1.0 + eps ** 2)), known_optimum=opt)


def _reduced_value(k, params):
    """Minimize ``(1-a)^p + k*(max(a,0)/eps)^p`` over ``a``.

    This is the exact partial minimization of the model objective over
    the revealed constraints: coordinates of unrevealed constraints are
    zero at the optimum, and each revealed coordinate is
    ``min(0, -a/eps)`` once the first coordinate ``a`` is fixed.
    """
    p, eps = params.p, params.eps
    dphi = lambda a: -p * (1.0 - a) ** (p - 1) + k * p * a ** (p - 1) / eps ** p
    a = brentq(dphi, 0.0, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return (1.0 - a) ** p + k * (a / eps) ** p


def run_analyze_lower_bdd(params, order=None):
    """Reveal constraints in ``order`` and record the optimal value after each.

    For ``p = 2`` each value is the squared distance from ``e_1`` to the
    intersection of the revealed halfspaces, computed with the active-set
    projection.  For larger ``p`` the revealed subproblem is reduced to one
    variable and solved by a bracketing root finder.
    """
    m = params.n - 1
    order = list(range(1, m + 1)) if order is None else [int(j) for j in order]
    if len(order) > m:
        raise ValueError(f"at most {m} constraints can be revealed")
    if len(set(order)) != len(order) or any(j < 1 or j > m for j in order):
        raise ValueError(f"order must list distinct indices in 1..{m}")
    n, eps = params.n, params.eps
    e1 = np.zeros(n)
    e1[0] = 1.0
    values, hs = [], []
    for k, j in enumerate(order, start=1):
        a = np.zeros(n)
        a[0], a[j] = 1.0, eps
        hs.append(Halfspace(a, 0.0))
        if params.p == 2:
            x, _ = project_intersection(e1, hs)
            values.append(float(np.sum((e1 - x) ** 2)))
        else:
            values.append(_reduced_value(k, params))
    return values


# --------------------------------------------------------------------------
# instrumented quadratic family for the cutting scheme


def instrumented_family(m=1000, eps=1.0, d1=1.0, d2=2.0):
    """Quadratic variant of the model problem with an analytic optimum.

    Objective ``1/2 (x - e_1)^T D (x - e_1) - d1/2`` with
    ``D = diag(d1, d2, ..., d2)`` (the constant makes the linear-term form
    exact), constraints as in the model problem with ``m = n - 1``.
    With ``k`` constraints present the minimizer has first coordinate
    ``d1 / (d1 + c)``, ``c = k * d2 / eps**2``, and the objective value
    ``d1 c / (2 (d1 + c)) - d1/2``.
    """
    n = m + 1
    D = np.full(n, float(d2))
    D[0] = d1
    e1 = np.zeros(n)
    e1[0] = 1.0
    f = ObjectiveFunction.general_quadratic(np.diag(D), -D * e1)
    cons = []
    for j in range(1, n):
        a = np.zeros(n)
        a[0], a[j] = 1.0, eps
        cons.append(ConstraintFunction.affine(a, 0.0))
    c = m * d2 / eps ** 2
    alpha = d1 / (d1 + c)
    x = np.full(n, -alpha / eps)
    x[0] = alpha
    value = 0.5 * d1 * c / (d1 + c) - 0.5 * d1
    return Problem(f, cons, diameter=2.0, kappa=float(np.sqrt(1 + eps ** 2)),
                   known_optimum=(x, value))
