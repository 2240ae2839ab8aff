"""Subgradient method with feasibility updates.

Each iteration either moves a distance ``h_k = R/sqrt(k + 0.5)`` along the
negative objective gradient, or, when the current point is far from some
supporting halfspace of the constraints, projects toward the feasible set
instead.  Two feasibility strategies are available: ``"1A"`` projects onto
a single farthest halfspace (optionally an aggregate built by the active-set
projection), ``"1B"`` sweeps over the constraints with alternating
projections.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import MaxIterationsError
from .geometry import (ALL_SPACE, Halfspace, aggregate_halfspace, project_intersection,
                       supporting_halfspace)
from .trace import CONVERGED, FEASIBILITY_STEP, OBJECTIVE_STEP, IterateTrace, TraceRow

GRAD_TOL = 1e-12


def step_size(k, R):
    """``R / sqrt(k + 0.5)``."""
    return R / np.sqrt(k + 0.5)


@dataclass
class SubgradState:
    k: int
    x: np.ndarray
    mode: str = "1A"
    window: int = 1
    aggregate: bool = False
    order: tuple | None = None
    qp_cap: int | None = None
    trace: IterateTrace = field(default_factory=lambda: IterateTrace(("h", "sweep2")))
    converged: bool = False


def _order(p, s):
    return range(p.m) if s.order is None else s.order


def _halfspace(p, j, x, cache=None):
    block = p.affine_block
    if block is not None:
        A, b = block
        s = float(A[j] @ x - b[j])
        return Halfspace(A[j], b[j]) if s >= 0 else ALL_SPACE
    return supporting_halfspace(p.constraints[j], x)


def _objective_move(p, x, h):
    g = p.objective.gradient(x)
    ng = float(np.linalg.norm(g))
    if ng <= GRAD_TOL:
        return None
    return p.q.project(x - (h / ng) * g)


def _row(p, s, x, step, dist, h, sweep2=None, **extra):
    f = p.objective.value(x)
    viol = p.max_violation(x)
    return TraceRow(k=s.k, f=f, viol=viol, step=step, dist=float(dist), inner=0,
                    h=h, sweep2=sweep2, x=np.array(x), extra=extra)


def step_1a(p, s):
    """One iteration using the farthest supporting halfspace.

    The scan over constraints stops at the first halfspace at distance at
    least ``h_k``.  With ``s.aggregate`` set and no such halfspace, the
    active-set projection onto all cuts yields an aggregate halfspace that
    is used when it is at least ``h_k`` away.
    """
    x, h = s.x, step_size(s.k, p.diameter)
    hs, dmax, target = [], 0.0, None
    block = p.affine_block
    if block is not None and s.order is None:
        A, b = block
        sl = A @ x - b
        d = np.maximum(sl, 0.0) / np.linalg.norm(A, axis=1)
        hit = np.flatnonzero(d >= h)
        if hit.size:
            j = int(hit[0])
            target, dmax = Halfspace(A[j], b[j]), float(d[j])
        else:
            dmax = float(d.max())
            hs = [Halfspace(A[j], b[j]) for j in np.flatnonzero(sl >= 0)]
    else:
        for j in _order(p, s):
            H = _halfspace(p, j, x)
            dj = H.distance(x)
            if dj >= h and not H.is_all_space:
                target, dmax = H, dj
                break
            dmax = max(dmax, dj)
            if not H.is_all_space:
                hs.append(H)
    if target is None and s.aggregate and hs:
        try:
            _, st = project_intersection(x, hs, max_iter=s.qp_cap)
        except MaxIterationsError as exc:
            st = exc.state
        agg = aggregate_halfspace(x, st)
        if agg.distance(x) >= h:
            target, dmax = agg, agg.distance(x)
    if target is None:
        nxt = _objective_move(p, x, h)
        if nxt is None:
            if not hs or dmax <= 0.0:
                s.trace.append(_row(p, s, x, CONVERGED, dmax, h))
                return replace(s, converged=True)
            # zero gradient but infeasible: fall back to the farthest cut
            target = max(hs, key=lambda H: H.distance(x))
        else:
            s.trace.append(_row(p, s, x, OBJECTIVE_STEP, dmax, h))
            return replace(s, k=s.k + 1, x=nxt)
    nxt = p.q.project(target.project(x))
    s.trace.append(_row(p, s, x, FEASIBILITY_STEP, dmax, h))
    return replace(s, k=s.k + 1, x=nxt)


def step_1b(p, s):
    """One iteration of the alternating-projection sweep.

    ``S_{j,k}`` is the window of the last ``s.window`` indices visited; with
    a window of one each sub-step is a single halfspace projection.  The
    sweep stops as soon as the accumulated squared movement reaches
    ``h_k**2``.
    """
    x, h = s.x, step_size(s.k, p.diameter)
    y = x
    total, dmax = 0.0, 0.0
    recent = []
    for j in _order(p, s):
        H = _halfspace(p, j, y)
        dmax = max(dmax, H.distance(y))
        recent.append(H)
        if len(recent) > s.window:
            recent.pop(0)
        if len(recent) == 1 or all(r.is_all_space for r in recent[:-1]):
            y_new = H.project(y)
        else:
            try:
                y_new, _ = project_intersection(y, recent, max_iter=s.qp_cap)
            except MaxIterationsError as exc:
                y_new = H.project(y) if exc.state is None else exc.state.solution
        total += float((y_new - y) @ (y_new - y))
        y = y_new
        if total >= h * h:
            s.trace.append(_row(p, s, x, FEASIBILITY_STEP, dmax, h, total))
            return replace(s, k=s.k + 1, x=p.q.project(y))
    nxt = _objective_move(p, y, h)
    extra = {"x_sweep": np.array(y), "f_sweep": p.objective.value(y)}
    if nxt is None:
        if p.max_violation(y) <= 1e-9:
            s.trace.append(_row(p, s, x, CONVERGED, dmax, h, total, **extra))
            return replace(s, converged=True, x=y)
        nxt = p.q.project(y)
        s.trace.append(_row(p, s, x, FEASIBILITY_STEP, dmax, h, total, **extra))
        return replace(s, k=s.k + 1, x=nxt)
    s.trace.append(_row(p, s, x, OBJECTIVE_STEP, dmax, h, total, **extra))
    return replace(s, k=s.k + 1, x=nxt)


def run_subgradient(p, mode="1A", K=1000, x_start=None, window=1, aggregate=False,
                    order=None, qp_cap=None):
    """Run ``K`` iterations of the subgradient method.

    Parameters
    ----------
    p : Problem
    mode : {"1A", "1B"}
    K : int
        Iteration budget.  The run stops early when the objective gradient
        vanishes at a feasible point.
    x_start : array_like, optional
        Defaults to the projection onto ``Q`` of the unconstrained minimizer.
    window : int
        Size of ``S_{j,k}`` for the sweep.
    aggregate : bool
        Use the active-set aggregate halfspace in mode ``"1A"``.
    order : sequence of int, optional
        Constraint scan order; a permutation of ``range(m)``.

    Returns
    -------
    IterateTrace
        Row ``k`` describes ``x_k`` and the step taken from it.  Sweep rows
        carry ``x_sweep`` and ``f_sweep`` (the point ``x_k^m``) in ``extra``.
    """
    if mode not in ("1A", "1B"):
        raise ValueError(f"mode must be '1A' or '1B', got {mode!r}")
    if window < 1:
        raise ValueError("window must be a positive integer")
    if order is not None:
        order = tuple(int(j) for j in order)
        if sorted(order) != list(range(p.m)):
            raise ValueError("order must be a permutation of the constraint indices")
    x = p.q.project(p.objective.minimizer() if x_start is None
                    else np.asarray(x_start, dtype=float))
    s = SubgradState(0, x, mode, int(window), aggregate, order, qp_cap)
    step = step_1a if mode == "1A" else step_1b
    while s.k < K and not s.converged:
        s = step(p, s)
    s.trace.converged = s.converged
    s.trace.info["x_final"] = s.x
    return s.trace


def subgradient_rate_bounds(k, R, M1, M2, m=1, kappa=1.0):
    """Right-hand sides of the rate guarantees after ``k >= 3`` iterations.

    Returns ``(gap_bound, viol_bound, dist_bound)``: the objective-gap bound
    shared by both strategies, the constraint-value bound for ``"1A"`` and
    the distance-to-feasible bound for ``"1B"``.
    """
    if k < 3:
        raise ValueError("the rate bounds need k >= 3")
    r = np.sqrt(3.0) * R / np.sqrt(k - 1.5)
    return M1 * r, M2 * r, kappa * np.sqrt(m) * r
