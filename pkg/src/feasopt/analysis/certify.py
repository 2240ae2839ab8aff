"""Checkers comparing solver traces with the rate guarantees.

Each checker takes a finished trace plus instance constants and returns a
report dict whose ``violations`` entry lists every failed comparison.
"""
from __future__ import annotations

import numpy as np

from ..subgrad import subgradient_rate_bounds
from ..trace import OBJECTIVE_STEP
from .regularity import _halfspaces, distance_to_feasible
from .sequences import haugazeau_eps_bar, seq_upper_bound


def _ball_points(rng, center, radius, samples, n):
    dirs = rng.standard_normal((samples, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    # half of the points on the sphere, where norms of affine maps peak
    radii = radius * rng.random(samples) ** (1.0 / n)
    radii[: samples // 2] = radius
    return np.asarray(center, dtype=float) + dirs * radii[:, None]


def lipschitz_estimates(p, center=None, radius=None, samples=2000, seed=0):
    """``(M1, M2)``: largest objective gradient and constraint subgradient norms on a ball.

    The ball defaults to ``B(x*, R)``.  For a quadratic objective on a
    ball the exact bound ``||f'(c)|| + lambda_max * radius`` is used
    instead of sampling; affine constraints contribute their normal norms.
    """
    n = p.dim
    if center is None:
        center = p.known_optimum[0] if p.known_optimum is not None else np.zeros(n)
    center = np.asarray(center, dtype=float)
    radius = p.diameter if radius is None else radius
    f = p.objective
    qf = f.quadratic_form()
    pts = None
    if qf is not None:
        lam = float(np.linalg.eigvalsh(qf[0]).max())
        M1 = float(np.linalg.norm(f.gradient(center))) + lam * radius
    else:
        pts = _ball_points(np.random.default_rng(seed), center, radius, samples, n)
        M1 = max(float(np.linalg.norm(f.gradient(x))) for x in pts)
    M2 = 0.0
    for g in p.constraints:
        if g.kind == "affine":
            M2 = max(M2, float(np.linalg.norm(g.params["a"])))
        elif g.kind.startswith("dist-"):
            M2 = max(M2, 1.0)
        else:
            if pts is None:
                pts = _ball_points(np.random.default_rng(seed), center, radius, samples, n)
            M2 = max(M2, max(float(np.linalg.norm(g.subgradient(x))) for x in pts))
    return M1, M2


def check_subgradient_rates(p, trace, mode, M1, M2, kappa, checkpoints=(10, 100, 1000),
                            tol=1e-12):
    """Look for an index ``i' <= k`` meeting both rate bounds at each checkpoint.

    Candidates are the rows that took an objective step.  In mode ``"1A"``
    the quantities are the gap and largest constraint value at ``x_i``; in
    mode ``"1B"`` they are the gap and distance to the feasible set at the
    sweep end point ``x_i^m``.
    """
    f_star = p.known_optimum[1]
    hs = _halfspaces(p) if mode == "1B" else None
    cands = []
    for row in trace:
        if row.step != OBJECTIVE_STEP:
            continue
        if mode == "1A":
            gap = row.f - f_star
            feas = max(g.value(row.x) for g in p.constraints)
        else:
            gap = row.extra["f_sweep"] - f_star
            feas = distance_to_feasible(p, row.extra["x_sweep"], hs)
        cands.append((row.k, gap, feas))
    report = {"checkpoints": [], "violations": []}
    for k in checkpoints:
        if trace.last is None or trace.last.k < k and not trace.converged:
            continue
        gap_b, viol_b, dist_b = subgradient_rate_bounds(k, p.diameter, M1, M2, p.m, kappa)
        feas_b = viol_b if mode == "1A" else dist_b
        ok = [(i, gp, fs) for i, gp, fs in cands
              if i <= k and gp <= gap_b + tol and fs <= feas_b + tol]
        entry = {"k": k, "gap_bound": gap_b, "feas_bound": feas_b, "witness": ok[0] if ok else None}
        report["checkpoints"].append(entry)
        if not ok:
            report["violations"].append(entry)
    return report


def check_haugazeau_rates(p, trace, kappa, slack=1e-9):
    """Compare a Haugazeau trace with the ``O(1/k)`` gap and ``O(1/sqrt k)`` iterate bounds.

    The gap bound is evaluated for each reading of ``eps_bar`` (see
    :func:`haugazeau_eps_bar`); a reading certifies when no row exceeds
    it.  Rows are also checked against the two distance estimates for the
    halfspace ``{<f'(x*), y - x*> >= 0}``: the lower bound on the distance
    of ``x_k`` to it, and ``||x_k - x*|| <= sqrt(2 delta_k / mu)``.
    """
    f = p.objective
    x_star, f_star = p.known_optimum
    mu = f.mu
    gs = f.gradient(x_star)
    g = float(np.linalg.norm(gs))
    x0 = trace.info["x0"]
    delta0 = f_star - f.value(x0)
    readings = haugazeau_eps_bar(mu, kappa, g)
    ks = np.array([r.k for r in trace], dtype=float)
    deltas = np.array([f_star - r.f for r in trace])
    report = {"delta0": delta0, "eps_bar": readings, "certified": {}, "violations": []}
    for name, eb in readings.items():
        bound = seq_upper_bound(delta0, eb, ks)
        report["certified"][name] = bool(np.all(deltas <= bound + slack))
    for r, d in zip(trace, deltas):
        err = float(np.linalg.norm(r.x - x_star))
        rhs = np.sqrt(2.0 / mu * max(d, 0.0))
        if err > rhs + slack:
            report["violations"].append(("iterate-error", r.k, err, rhs))
        if d > 0:
            lower = (g - np.sqrt(max(g * g - 2 * mu * d, 0.0))) / mu
            dist = max(0.0, -float(gs @ (r.x - x_star))) / g
            if dist < lower - slack:
                report["violations"].append(("halfspace-distance", r.k, dist, lower))
    if not any(report["certified"].values()):
        report["violations"].append(("gap", None, None, None))
    return report
