"""Strongly convex objectives: projected gradient inside an outer cutting scheme.

The outer loop keeps two halfspaces containing the feasible set, a history
halfspace ``H°`` and a separating halfspace ``H+``.  The inner loop runs
projected gradient on their intersection until the iterate is certified
close enough to the subproblem minimizer, and the two halfspaces are then
merged into the next history halfspace.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyIntersectionError, InnerIterationLimit, NotStronglyConvexError
from .geometry import (ALL_SPACE, Halfspace, farthest_halfspace, minimize_two_halfspaces,
                       project_boundary_intersection, project_cone2, project_two_halfspaces)
from .trace import CONVERGED, IterateTrace, TraceRow

OUTER_STEP = "outer-step"


def projected_gradient_step(f, K, x):
    """``P_K(x - f'(x)/L)``.

    ``K`` is a halfspace, a pair of halfspaces, or a callable projection.
    """
    y = np.asarray(x, dtype=float) - f.gradient(x) / f.lipschitz
    if callable(K):
        return K(y)
    if isinstance(K, Halfspace):
        return K.project(y)
    return project_two_halfspaces(y, *K)


@dataclass
class InnerCertificate:
    """Gradient-mapping certificate ``err_bound = (L/mu) * residual``.

    The step map ``x -> P_K(x - f'(x)/L)`` is a ``(1 - mu/L)``-contraction,
    so ``||x - x_K*|| <= ||x - T x|| / (1 - (1 - mu/L))``.
    """

    residual: float
    err_bound: float
    inner_count: int = 0


def certificate(f, K, x, inner_count=0):
    """Certificate at ``x`` together with the next projected-gradient point."""
    y = projected_gradient_step(f, K, x)
    r = float(np.linalg.norm(np.asarray(x) - y))
    return InnerCertificate(r, f.lipschitz / f.mu * r, inner_count), y


def separating_halfspace(p, x):
    """Farthest supporting halfspace at ``x``; whole space when all ``f_j(x) < 0``."""
    return farthest_halfspace(p, x)[1]


def combine_halfspaces(h_circ, h_plus, x_k, grad, k, alpha):
    """Merge ``H°_k`` and ``H+_k`` into ``H°_{k+1}``.

    Falls back to ``h_plus`` when either input is the whole space, when the
    two boundaries do not meet, or when ``x_k`` is farther than
    ``alpha/k**2`` from their intersection.  Otherwise the new normal is the
    projection of ``-grad`` onto the cone of the two normals, anchored at
    the nearest point of the boundary intersection.
    """
    if h_circ.is_all_space or h_plus.is_all_space:
        return h_plus
    try:
        x_tilde = project_boundary_intersection(x_k, h_circ, h_plus)
    except EmptyIntersectionError:
        return h_plus
    if float(np.linalg.norm(np.asarray(x_k) - x_tilde)) > alpha / k ** 2:
        return h_plus
    v = project_cone2(-np.asarray(grad, dtype=float), h_circ.normal, h_plus.normal)
    if not np.any(v):
        return ALL_SPACE
    return Halfspace(v, float(v @ x_tilde))


@dataclass
class OuterState:
    k: int
    x: np.ndarray
    h_circ: Halfspace = ALL_SPACE
    h_plus: Halfspace = ALL_SPACE
    alpha: float = 1.0
    err_bound: float = np.inf
    trace: IterateTrace = field(default_factory=lambda: IterateTrace(("err_bound",)))
    converged: bool = False
    total_inner: int = 0


def outer_step(p, s, inner_cap=1_000_000, converge_tol=1e-12, instrument=False):
    """One outer iteration: inner loop, acceptance test, halfspace update."""
    f, k = p.objective, s.k
    K = (s.h_circ, s.h_plus)
    tol1 = s.alpha / k ** 2
    x = s.x
    count = 0
    while True:
        cert, y = certificate(f, K, x, count)
        if count >= 1 and cert.err_bound <= tol1:
            j, h_next, d_plus = farthest_halfspace(p, x)
            if d_plus >= 2 * cert.err_bound and d_plus > 0:
                break
            if d_plus == 0 and cert.err_bound <= converge_tol * (1 + np.linalg.norm(x)):
                break
        if count >= inner_cap:
            raise InnerIterationLimit(k, inner_cap)
        x = y
        count += 1
    extra = {}
    if instrument:
        xs = minimize_two_halfspaces(f, *K)
        extra = {"x_star": xs, "f_star": f.value(xs), "true_err": float(np.linalg.norm(x - xs))}
    converged = d_plus == 0
    row = TraceRow(k=k, f=f.value(x), viol=p.max_violation(x),
                   step=CONVERGED if converged else OUTER_STEP, dist=float(d_plus),
                   inner=count, err_bound=cert.err_bound, x=np.array(x), extra=extra)
    s.trace.append(row)
    h_circ = combine_halfspaces(s.h_circ, s.h_plus, x, f.gradient(x), k, s.alpha)
    return OuterState(k + 1, x, h_circ, h_next, s.alpha, cert.err_bound, s.trace,
                      converged, s.total_inner + count)


def run_algorithm53(p, alpha=1.0, K=500, x_start=None, inner_cap=1_000_000,
                    converge_tol=1e-12, instrument=False):
    """Run ``K`` outer iterations of the cutting scheme.

    Parameters
    ----------
    p : Problem
        Objective with ``mu > 0`` and a gradient Lipschitz constant.
    alpha : float
        Accuracy schedule: the inner loop stops once the certified error is
        at most ``alpha / k**2`` and the next cut is at least twice that far.
    K : int
        Outer iteration budget.
    x_start : array_like, optional
        Inner starting point at ``k = 1``; later inner loops start warm from
        the previous outer iterate.  Defaults to the unconstrained minimizer.
    inner_cap : int
        Inner iterations allowed per outer step.
    instrument : bool
        Also record the exact subproblem minimizer (quadratic objectives).

    Returns
    -------
    IterateTrace
        Row ``k`` holds the accepted inner iterate ``x_k``; ``dist`` is
        ``d(x_k, H+_{k+1})`` and ``inner`` the inner iteration count.

    Raises
    ------
    InnerIterationLimit
        When an inner loop exceeds ``inner_cap``.
    """
    f = p.objective
    if not f.strongly_convex or f.lipschitz is None:
        raise NotStronglyConvexError("the cutting scheme needs mu > 0 and a finite L")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x = f.minimizer() if x_start is None else np.asarray(x_start, dtype=float)
    s = OuterState(1, x, alpha=float(alpha))
    while s.k <= K and not s.converged:
        s = outer_step(p, s, inner_cap, converge_tol, instrument)
    s.trace.converged = s.converged
    s.trace.info.update(x_final=s.x, total_inner=s.total_inner)
    return s.trace


def performance_estimate(err_bound, d_plus, kappa, grad_norm_star, M, mu):
    """A-posteriori bounds on ``|f(x_k) - f(x*)|`` and ``||x_k - x*||``.

    With ``d_bar = err_bound + kappa * d_plus`` the gap bound is
    ``grad_norm_star * d_bar + M * err_bound`` and the distance bound is
    ``err_bound + sqrt(2 * grad_norm_star * d_bar / mu)``.
    """
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    d_bar = err_bound + kappa * d_plus
    gap = grad_norm_star * d_bar + M * err_bound
    dist = err_bound + np.sqrt(2.0 * grad_norm_star * d_bar / mu)
    return gap, dist
