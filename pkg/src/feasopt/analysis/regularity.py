"""Empirical linear-regularity constants for polyhedral feasible sets."""
from __future__ import annotations

import numpy as np

from ..geometry import Halfspace, project_intersection


def _halfspaces(p):
    A, b = p.polyhedral_form()
    return [Halfspace(a, bi) for a, bi in zip(A, b)]


def distance_to_feasible(p, x, hs=None):
    """``d(x, C)`` for a polyhedral feasible set, via the active-set projection."""
    hs = _halfspaces(p) if hs is None else hs
    y, _ = project_intersection(x, hs)
    return float(np.linalg.norm(np.asarray(x, dtype=float) - y))


def max_cut_distance(p, x):
    """``max_j d(x, C_j)`` over the constraint sublevel sets."""
    best = 0.0
    for g in p.constraints:
        rows = g.halfspace_rows()
        if rows is not None and rows[0].shape[0] == 1:
            a, b = rows[0][0], rows[1][0]
            best = max(best, max(0.0, float(a @ x) - b) / float(np.linalg.norm(a)))
        elif g.kind in ("dist-halfspace", "dist-ball", "dist-box"):
            best = max(best, g.value(x))
        else:
            y, _ = project_intersection(x, [Halfspace(a, bi) for a, bi in zip(*rows)])
            best = max(best, float(np.linalg.norm(x - y)))
    return best


def regularity_ratio(p, x, hs=None):
    """``d(x, C) / max_j d(x, C_j)``, or ``None`` for feasible ``x``."""
    den = max_cut_distance(p, x)
    if den <= 1e-12:
        return None
    return distance_to_feasible(p, x, hs) / den


def estimate_kappa(p, samples=10_000, center=None, radius=None, seed=0):
    """Largest sampled ratio ``d(x, C) / max_j d(x, C_j)``.

    Points are drawn uniformly from the ball ``B(center, radius)``; the
    defaults are the known optimum (or the origin) and the problem's
    diameter.  The result is a lower estimate of the true constant.

    Raises
    ------
    ValueError
        When no sampled point is infeasible.
    """
    rng = np.random.default_rng(seed)
    n = p.dim
    if center is None:
        center = p.known_optimum[0] if p.known_optimum is not None else np.zeros(n)
    radius = p.diameter if radius is None else radius
    dirs = rng.standard_normal((samples, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    radii = radius * rng.random(samples) ** (1.0 / n)
    pts = np.asarray(center, dtype=float) + dirs * radii[:, None]
    hs = _halfspaces(p)
    best = None
    for x in pts:
        r = regularity_ratio(p, x, hs)
        if r is not None and (best is None or r > best):
            best = r
    if best is None:
        raise ValueError("no infeasible sample drawn; enlarge the sampling ball")
    return max(1.0, best)


def trajectory_kappa(p, points):
    """Largest ratio ``d(x, C) / max_j d(x, C_j)`` over the given points (at least 1)."""
    hs = _halfspaces(p)
    best = 1.0
    for x in points:
        r = regularity_ratio(p, np.asarray(x, dtype=float), hs)
        if r is not None:
            best = max(best, r)
    return best
