"""Generalized Haugazeau method for strongly convex objectives.

Every iterate minimizes the objective over the intersection of a history
halfspace ``H°`` (on which the previous iterate is optimal) and a fresh
supporting halfspace ``H+`` of the constraints.  Both contain the feasible
set, so ``f(x_k)`` increases toward the optimal value from below.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import (ALL_SPACE, Halfspace, farthest_halfspace, minimize_two_halfspaces,
                       project_intersection, supporting_halfspace)
from .errors import NotStronglyConvexError
from .trace import CONVERGED, IterateTrace, TraceRow

HAUGAZEAU_STEP = "haugazeau-step"


def history_halfspace(f, x):
    """``{y : <-f'(x), y - x> <= 0}``, the halfspace on which ``x`` minimizes ``f``."""
    g = f.gradient(x)
    if not np.any(g):
        return ALL_SPACE
    return Halfspace(-g, float(-g @ x))


@dataclass
class HaugazeauState:
    k: int
    x: np.ndarray
    h_circ: Halfspace = ALL_SPACE
    trace: IterateTrace = field(default_factory=IterateTrace)
    converged: bool = False
    cuts: tuple = ()


def _minimize(p, hs):
    """Minimize the objective over a list of halfspaces (two or more)."""
    proper = [h for h in hs if not h.is_all_space]
    if len(proper) <= 2:
        return minimize_two_halfspaces(p.objective, *(proper + [ALL_SPACE] * (2 - len(proper))))
    A, b = p.objective.quadratic_form()
    # change of variables y = L^T x turns the objective into a squared distance
    Lc = np.linalg.cholesky(A)
    xu = p.objective.minimizer()
    mapped = [Halfspace(np.linalg.solve(Lc, h.normal), h.offset) for h in proper]
    y, _ = project_intersection(Lc.T @ xu, mapped)
    return np.linalg.solve(Lc.T, y)


def _row(p, k, x, step, dist):
    return TraceRow(k=k, f=p.objective.value(x), viol=p.max_violation(x), step=step,
                    dist=float(dist), x=np.array(x))


def haugazeau_step(p, s, keep=1):
    """One iteration with the farthest supporting halfspace as ``H+``."""
    j, h_plus, d = farthest_halfspace(p, s.x)
    if j is None or d <= 0.0:
        s.trace.append(_row(p, s.k + 1, s.x, CONVERGED, 0.0))
        return replace(s, converged=True)
    cuts = (s.cuts + (h_plus,))[-keep:]
    x_new = _minimize(p, [s.h_circ, *cuts])
    s.trace.append(_row(p, s.k + 1, x_new, HAUGAZEAU_STEP, d))
    return replace(s, k=s.k + 1, x=x_new, h_circ=history_halfspace(p.objective, x_new),
                   cuts=cuts if keep > 1 else ())


def alternative_step(p, s):
    """One outer iteration of the per-constraint sweep.

    Constraint ``j`` is linearized at the running point ``x_k^{j-1}``; the
    running point is then replaced by the minimizer over the running
    history halfspace and that cut.
    """
    y, h_circ = s.x, s.h_circ
    dmax = 0.0
    for g in p.constraints:
        h_plus = supporting_halfspace(g, y)
        d = h_plus.distance(y)
        if h_plus.is_all_space or d <= 0.0:
            continue
        dmax = max(dmax, d)
        y = minimize_two_halfspaces(p.objective, h_circ, h_plus)
        h_circ = history_halfspace(p.objective, y)
    if dmax == 0.0:
        s.trace.append(_row(p, s.k + 1, s.x, CONVERGED, 0.0))
        return replace(s, converged=True)
    s.trace.append(_row(p, s.k + 1, y, HAUGAZEAU_STEP, dmax))
    return replace(s, k=s.k + 1, x=y, h_circ=h_circ)


def run(p, variant="classic", K=1000, x_start=None, h_circ=None, keep=1):
    """Run ``K`` outer iterations.

    Parameters
    ----------
    p : Problem
        The objective must be strongly convex.
    variant : {"classic", "alternative"}
    K : int
    x_start, h_circ : optional
        Warm start.  ``x_start`` must minimize the objective over ``h_circ``;
        the default is the unconstrained minimizer with the whole space.
    keep : int
        Number of recent cuts kept in the subproblem (classic variant only;
        values above 1 need a quadratic objective).

    Returns
    -------
    IterateTrace
        Row ``k`` holds the iterate ``x_k`` produced by iteration ``k``.
    """
    if not p.objective.strongly_convex:
        raise NotStronglyConvexError("Haugazeau iterations need a strongly convex objective")
    if variant not in ("classic", "alternative"):
        raise ValueError(f"variant must be 'classic' or 'alternative', got {variant!r}")
    if keep > 1 and (variant != "classic" or not p.objective.is_quadratic):
        raise ValueError("keep > 1 needs the classic variant and a quadratic objective")
    x0 = p.objective.minimizer() if x_start is None else np.asarray(x_start, dtype=float)
    s = HaugazeauState(0, x0, ALL_SPACE if h_circ is None else h_circ)
    s.trace.info["x0"] = x0
    while s.k < K and not s.converged:
        s = haugazeau_step(p, s, keep) if variant == "classic" else alternative_step(p, s)
    s.trace.converged = s.converged
    s.trace.info["x_final"] = s.x
    s.trace.info["h_circ"] = s.h_circ
    return s.trace


def check_triangular(g, pairs, tol=1e-9):
    """Pairs ``(y, z)`` violating ``d(y, H_y) <= ||y - z|| + d(z, H_z)``.

    ``H_y`` is the supporting halfspace at ``y`` when ``g(y) > 0`` and the
    whole space otherwise.  Each violation is reported as a dict with the
    three quantities involved.
    """
    def dist(w):
        v = g.value(w)
        if v <= 0:
            return 0.0
        return v / float(np.linalg.norm(g.subgradient(w)))

    out = []
    for y, z in pairs:
        y, z = np.atleast_1d(np.asarray(y, dtype=float)), np.atleast_1d(np.asarray(z, dtype=float))
        dy, dz = dist(y), dist(z)
        gap = float(np.linalg.norm(y - z))
        if dy > gap + dz + tol:
            out.append({"y": y, "z": z, "d_y": dy, "d_z": dz, "dist": gap,
                        "excess": dy - gap - dz})
    return out
