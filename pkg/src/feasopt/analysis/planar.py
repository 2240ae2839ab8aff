"""Planar examples where Haugazeau's method is provably slow.

``two_halfspace_*``: projecting ``(1, 0)`` onto a wedge of two halfspaces
whose boundaries make angles ``+theta`` and ``-theta`` with the first axis,
started from a point ``alpha_1 (cos theta, sin theta)`` on one boundary.
The distance ``alpha_k`` of the iterate to the apex obeys a closed-form
recurrence and ``1 - ||x_0 - x_k||^2`` decays like ``1/k``.

``no_regularity_*``: the same projection onto ``C+ ∩ C-`` with
``C± = {(u, v) : ±v >= |u|^p}``, which lacks linear regularity; the first
coordinate decays no faster than ``k ** (-1/(2p - 1))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .. import haugazeau
from ..geometry import Halfspace, minimize_two_halfspaces
from ..model import ConstraintFunction, ObjectiveFunction, Problem

X0 = np.array([1.0, 0.0])


@dataclass(frozen=True)
class TwoHalfspaceParams:
    theta: float

    def __post_init__(self):
        if not 0 < self.theta < np.pi / 2:
            raise ValueError("theta must lie in (0, pi/2)")


@dataclass(frozen=True)
class NoRegularityParams:
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError("p must be >= 1")


def two_halfspace_problem(theta):
    """``min 1/2 ||x - (1,0)||^2`` over ``H+ ∩ H-``, ``H± = {±v >= u tan(theta)}``.

    The regularity constant of the pair is ``1/sin(theta)``, attained at
    points on the first axis.
    """
    TwoHalfspaceParams(theta)
    s, c = np.sin(theta), np.cos(theta)
    cons = [ConstraintFunction.affine([s, -c], 0.0), ConstraintFunction.affine([s, c], 0.0)]
    return Problem(ObjectiveFunction.shifted_quadratic(X0), cons, diameter=2.0,
                   kappa=1.0 / s, known_optimum=(np.zeros(2), 0.5))


def two_halfspace_recurrence(alpha_k, theta):
    """``alpha (cos t - alpha) / (cos t - alpha cos 2t)``."""
    c = np.cos(theta)
    if alpha_k < 0 or alpha_k >= c:
        raise ValueError(f"alpha_k must lie in [0, cos(theta)) = [0, {c:.6g})")
    return alpha_k * (c - alpha_k) / (c - alpha_k * np.cos(2 * theta))


def two_halfspace_gamma(theta, alpha1):
    """Smallest ``gamma`` with ``alpha_{k+1} >= alpha_k (1 - gamma alpha_k)`` for ``alpha_k <= alpha1``.

    The recurrence reads ``alpha_{k+1} = alpha_k (1 - alpha_k r(alpha_k))`` with
    ``r(a) = (1 - cos 2t) / (cos t - a cos 2t)``, monotone in ``a``, so the
    supremum over ``(0, alpha1]`` sits at an endpoint.
    """
    c, c2 = np.cos(theta), np.cos(2 * theta)
    r = lambda a: (1 - c2) / (c - a * c2)
    return float(max(r(alpha1), r(0.0)))


def run_two_halfspace(theta, K, alpha1=0.1):
    """Run the Haugazeau iteration on the wedge for ``K`` steps.

    Returns a dict of arrays indexed by ``k = 1..K+1``: ``alpha`` (measured
    distance to the apex), ``predicted`` (recurrence applied to the measured
    previous value; NaN at ``k = 1``), ``one_minus_f`` (``1 - ||x_0 - x_k||^2``)
    and ``x`` (iterates).
    """
    TwoHalfspaceParams(theta)
    p = two_halfspace_problem(theta)
    x1 = alpha1 * np.array([np.cos(theta), np.sin(theta)])
    tr = haugazeau.run(p, "classic", K, x_start=x1,
                       h_circ=haugazeau.history_halfspace(p.objective, x1))
    xs = np.vstack([x1] + [r.x for r in tr])
    alpha = np.linalg.norm(xs, axis=1)
    pred = np.full(alpha.shape, np.nan)
    pred[1:] = [two_halfspace_recurrence(a, theta) for a in alpha[:-1]]
    f = np.sum((xs - X0) ** 2, axis=1)
    return {"k": np.arange(1, len(alpha) + 1), "alpha": alpha, "predicted": pred,
            "one_minus_f": 1.0 - f, "x": xs, "trace": tr}


# --------------------------------------------------------------------------
# no linear regularity


def project_power_set(point, p, sign=1):
    """Projection onto ``{(u, v) : sign * v >= |u|^p}``."""
    a, b = float(point[0]), float(point[1]) * sign
    flip = -1.0 if a < 0 else 1.0
    a = abs(a)
    if b >= a ** p:
        return np.array(point, dtype=float)
    g = lambda s: (s - a) + p * s ** (p - 1) * (s ** p - b)
    dist2 = lambda s: (s - a) ** 2 + (s ** p - b) ** 2
    cands = [0.0]
    grid = np.linspace(0.0, a, 257)
    vals = g(grid)
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        lo, hi = grid[i], grid[i + 1]
        if vals[i] == 0:
            cands.append(lo)
        elif vals[i + 1] == 0:
            cands.append(hi)
        else:
            cands.append(brentq(g, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps))
    s = min(cands, key=dist2)
    return np.array([flip * s, sign * s ** p])


def no_regularity_lower_step(u_k, p):
    """Lower bound ``u (1 - 2 u^(2p-1) / (1 - u + u^(2p-1)))`` on the next first coordinate."""
    if not 0 < u_k < 1:
        raise ValueError("u_k must lie in (0, 1)")
    t = u_k ** (2 * p - 1)
    return u_k * (1.0 - 2.0 * t / (1.0 - u_k + t))


def _cut(x, p, sign):
    proj = project_power_set(x, p, sign)
    n = x - proj
    d = float(np.linalg.norm(n))
    if d == 0.0:
        return None, 0.0
    return Halfspace(n, float(n @ proj)), d


def run_no_regularity(p, K):
    """Haugazeau iteration for projecting ``(1, 0)`` onto ``C+ ∩ C-``.

    Starts from ``x_1 = P_{C+}((1, 0))``.  Each step cuts with the
    supporting halfspace of whichever set is farther and minimizes the
    distance to ``(1, 0)`` over that cut and the history halfspace.

    Returns a dict of arrays indexed by ``k = 1..K+1``: ``u``, ``v``,
    ``bound`` (per-step lower bound from the previous ``u``; NaN at
    ``k = 1``) and ``side`` (which set was cut to reach the iterate).
    """
    NoRegularityParams(p)
    f = ObjectiveFunction.shifted_quadratic(X0)
    x = project_power_set(X0, p, +1)
    h_circ = haugazeau.history_halfspace(f, x)
    xs, sides = [x], [1]
    for _ in range(K):
        hp, dp = _cut(x, p, +1)
        hm, dm = _cut(x, p, -1)
        if dp == 0.0 and dm == 0.0:
            break
        h, side = (hm, -1) if dm >= dp else (hp, 1)
        x = minimize_two_halfspaces(f, h_circ, h)
        h_circ = haugazeau.history_halfspace(f, x)
        xs.append(x)
        sides.append(side)
    xs = np.array(xs)
    u, v = xs[:, 0], xs[:, 1]
    bound = np.full(u.shape, np.nan)
    bound[1:] = [no_regularity_lower_step(uk, p) for uk in u[:-1]]
    return {"k": np.arange(1, len(u) + 1), "u": u, "v": v, "bound": bound,
            "side": np.array(sides), "one_minus_f": 1.0 - np.sum((xs - X0) ** 2, axis=1)}


def fit_power_law(k, y):
    """Least-squares fit of ``log y = c + e log k``; returns ``(e, exp(c))``."""
    k, y = np.asarray(k, dtype=float), np.asarray(y, dtype=float)
    e, c = np.polyfit(np.log(k), np.log(y), 1)
    return float(e), float(np.exp(c))
