"""Halfspace calculus shared by all solvers.

Supporting halfspaces, distances and projections, including the projection
onto an intersection of halfspaces by a dual active-set method in the style
of Goldfarb and Idnani, and exact minimization of a strongly convex quadratic
over one or two halfspaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (EmptyIntersectionError, InfeasibleError, MaxIterationsError,
                     NotStronglyConvexError)

MEMBER_TOL = 1e-12
PARALLEL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Halfspace:
    """``{y : <a, y> <= b}``; ``normal=None`` encodes the whole space."""

    normal: np.ndarray | None = None
    offset: float = 0.0

    def __post_init__(self):
        if self.normal is not None:
            a = np.array(self.normal, dtype=float)
            if a.ndim != 1 or not np.any(a):
                raise ValueError("a proper halfspace needs a nonzero normal vector")
            a.setflags(write=False)
            object.__setattr__(self, "normal", a)
            object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def proper(cls, a, b):
        return cls(a, b)

    @property
    def is_all_space(self):
        return self.normal is None

    def slack(self, x):
        """Signed scaled violation ``(<a,x> - b)/||a||``; ``-inf`` for the whole space."""
        if self.normal is None:
            return -np.inf
        a = self.normal
        return (float(a @ x) - self.offset) / float(np.linalg.norm(a))

    def contains(self, x, tol=MEMBER_TOL):
        if self.normal is None:
            return True
        scale = max(1.0, abs(self.offset), float(np.linalg.norm(x)) * float(np.linalg.norm(self.normal)))
        return float(self.normal @ x) - self.offset <= tol * scale

    def distance(self, x):
        return max(0.0, self.slack(np.asarray(x, dtype=float)))

    def project(self, x):
        x = np.asarray(x, dtype=float)
        if self.normal is None:
            return x.copy()
        a = self.normal
        s = float(a @ x) - self.offset
        if s <= 0:
            return x.copy()
        return x - (s / float(a @ a)) * a

    def __eq__(self, other):
        if not isinstance(other, Halfspace):
            return NotImplemented
        if self.normal is None or other.normal is None:
            return self.normal is None and other.normal is None
        return np.array_equal(self.normal, other.normal) and self.offset == other.offset

    __hash__ = object.__hash__

    def __repr__(self):
        if self.normal is None:
            return "Halfspace(AllSpace)"
        return f"Halfspace(normal={self.normal.tolist()}, offset={self.offset!r})"


ALL_SPACE = Halfspace()


def dist_halfspace(x, h):
    return h.distance(x)


def project_halfspace(x, h):
    return h.project(x)


def supporting_halfspace(g, x):
    """Supporting halfspace of ``{g <= 0}`` at ``x``.

    Proper when ``g(x) >= 0`` and the selected subgradient is nonzero;
    the whole space otherwise (a zero subgradient at ``g(x) = 0`` means
    ``x`` is a minimizer of ``g`` and the cut would be trivial).
    """
    x = np.asarray(x, dtype=float)
    val = g.value(x)
    if val < 0:
        return ALL_SPACE
    a = g.subgradient(x)
    if not np.any(a):
        assert val <= 0, "positive constraint value with zero subgradient"
        return ALL_SPACE
    return Halfspace(a, float(a @ x) - val)


def supporting_halfspaces(p, x):
    """All supporting halfspaces at ``x`` with their distances."""
    x = np.asarray(x, dtype=float)
    block = p.affine_block
    if block is not None:
        A, b = block
        s = A @ x - b
        hs = [Halfspace(A[j], b[j]) if s[j] >= 0 else ALL_SPACE for j in range(len(s))]
        d = np.maximum(s, 0.0) / _row_norms(p)
        return hs, d
    hs = [supporting_halfspace(g, x) for g in p.constraints]
    return hs, np.array([h.distance(x) for h in hs])


def _row_norms(p):
    # cached per problem object; Problem is frozen so stash it in __dict__
    cache = p.__dict__.get("_feasopt_row_norms")
    if cache is None:
        cache = np.linalg.norm(p.affine_block[0], axis=1)
        p.__dict__["_feasopt_row_norms"] = cache
    return cache


def farthest_halfspace(p, x):
    """``(j, H_j, d(x, H_j))`` for the farthest supporting halfspace.

    Ties in distance go to a proper halfspace before the whole space and
    then to the lowest index.  ``j`` is ``None`` when every halfspace is the
    whole space.
    """
    x = np.asarray(x, dtype=float)
    block = p.affine_block
    if block is not None:
        A, b = block
        s = A @ x - b
        if np.all(s < 0):
            return None, ALL_SPACE, 0.0
        d = np.where(s >= 0, s / _row_norms(p), -1.0)
        j = int(np.argmax(d))
        return j, Halfspace(A[j], b[j]), float(d[j])
    best = (None, ALL_SPACE, 0.0)
    for j, g in enumerate(p.constraints):
        h = supporting_halfspace(g, x)
        if h.is_all_space:
            continue
        d = h.distance(x)
        if best[0] is None or d > best[2]:
            best = (j, h, d)
    return best


# --------------------------------------------------------------------------
# dual active-set projection


@dataclass
class ActiveSetState:
    """Working state of the dual active-set projection.

    ``active`` lists halfspace indices in the order they entered,
    ``multipliers`` are the KKT multipliers for the original (unnormalized)
    normals, and ``distances`` records ``||x0 - x||`` each time a constraint
    was added.
    """

    active: list = field(default_factory=list)
    solution: np.ndarray | None = None
    multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    distances: list = field(default_factory=list)
    iterations: int = 0


def _stack(hs, n):
    idx = [i for i, h in enumerate(hs) if not h.is_all_space]
    if not idx:
        return idx, np.zeros((0, n)), np.zeros(0), np.zeros(0)
    A = np.array([hs[i].normal for i in idx])
    b = np.array([hs[i].offset for i in idx])
    norms = np.linalg.norm(A, axis=1)
    return idx, A / norms[:, None], b / norms, norms


def project_intersection(x0, hs, max_iter=None, tol=1e-12):
    """Project ``x0`` onto the intersection of the halfspaces ``hs``.

    Dual active-set method with identity Hessian.  Starting from the
    unconstrained solution ``x0``, the most violated constraint is added at
    each major step; constraints whose multipliers would turn negative are
    dropped along the way.  The distance ``||x0 - x||`` is nondecreasing over
    the run.

    Parameters
    ----------
    x0 : array_like
        Point to project.
    hs : sequence of Halfspace
        Whole-space entries are ignored.
    max_iter : int, optional
        Cap on add/drop steps.  Defaults to ``10 * (m + n) + 50``.
    tol : float
        Relative feasibility tolerance on unit-normal violations.

    Returns
    -------
    x : ndarray
        The projection.
    state : ActiveSetState

    Raises
    ------
    InfeasibleError
        When no dual step is possible, i.e. the intersection is empty.
    MaxIterationsError
        When the cap is reached; ``err.state`` holds the partial state,
        whose solution is the projection onto the current active boundaries.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[0]
    idx, N, c, norms = _stack(hs, n)
    m = len(idx)
    if max_iter is None:
        max_iter = 10 * (m + n) + 50
    x = x0.copy()
    active = []           # positions into N
    u = np.zeros(0)       # multipliers for unit normals
    state = ActiveSetState(solution=x.copy(), distances=[0.0])
    if m == 0:
        return x, state
    feas_tol = tol * (1.0 + np.abs(c).max() + float(np.linalg.norm(x0)))

    def snapshot():
        state.active = [idx[i] for i in active]
        state.solution = x.copy()
        state.multipliers = u / norms[active] if active else np.zeros(0)

    it = 0
    while True:
        s = N @ x - c
        if active:
            s[active] = -np.inf
        q = int(np.argmax(s))
        if s[q] <= feas_tol:
            break
        uq = 0.0
        while True:
            it += 1
            if it > max_iter:
                snapshot()
                state.iterations = it - 1
                raise MaxIterationsError(
                    f"active-set projection exceeded {max_iter} steps", state)
            nq = N[q]
            if active:
                NA = N[active]
                r = np.linalg.solve(NA @ NA.T, NA @ nq)
                z = nq - NA.T @ r
            else:
                r = np.zeros(0)
                z = nq.copy()
            zz = float(z @ z)
            t2 = np.inf if zz <= 1e-20 else float(nq @ x - c[q]) / zz
            t1, drop = np.inf, None
            for pos in range(len(active)):
                if r[pos] > 0:
                    ratio = u[pos] / r[pos]
                    if ratio < t1:
                        t1, drop = ratio, pos
            t = min(t1, t2)
            if not np.isfinite(t):
                snapshot()
                raise InfeasibleError("halfspace intersection is empty")
            if np.isfinite(t2):
                x = x - t * z
            u = u - t * r
            uq += t
            if t2 <= t1:
                active.append(q)
                u = np.append(u, uq)
                state.distances.append(float(np.linalg.norm(x0 - x)))
                break
            del active[drop]
            u = np.delete(u, drop)

    if active:
        # polish: exact projection onto the active boundaries
        NA = N[active]
        lam = np.linalg.solve(NA @ NA.T, NA @ x0 - c[active])
        if np.all(lam >= -1e-12):
            x = x0 - NA.T @ lam
            u = np.maximum(lam, 0.0)
    snapshot()
    state.iterations = it
    if state.distances:
        state.distances[-1] = max(state.distances[-1], float(np.linalg.norm(x0 - x)))
    return x, state


def aggregate_halfspace(x0, state):
    """``{x : <x0 - x_k, x - x_k> <= 0}`` for the active-set iterate ``x_k``.

    ``state`` is an :class:`ActiveSetState` or the point ``x_k`` itself.
    Contains the intersection of the input halfspaces; whole space when
    ``x_k = x0``.
    """
    x0 = np.asarray(x0, dtype=float)
    xk = state.solution if isinstance(state, ActiveSetState) else np.asarray(state, dtype=float)
    a = x0 - xk
    if not np.any(a):
        return ALL_SPACE
    return Halfspace(a, float(a @ xk))


# --------------------------------------------------------------------------
# two halfspaces


def _candidates_two(xu, solve, hs):
    """KKT face candidates for min of a quadratic over up to two halfspaces.

    ``xu`` is the unconstrained minimizer and ``solve(v)`` applies the
    inverse Hessian.  Yields candidate points; the feasible candidate with
    the smallest objective value is the constrained minimizer.
    """
    yield xu
    for h in hs:
        a = h.normal
        Ha = solve(a)
        yield xu - ((float(a @ xu) - h.offset) / float(a @ Ha)) * Ha
    if len(hs) == 2:
        a1, a2 = hs[0].normal, hs[1].normal
        H1, H2 = solve(a1), solve(a2)
        G = np.array([[a1 @ H1, a1 @ H2], [a2 @ H1, a2 @ H2]])
        if abs(np.linalg.det(G)) > 1e-12 * G[0, 0] * G[1, 1]:
            rhs = np.array([a1 @ xu - hs[0].offset, a2 @ xu - hs[1].offset])
            lam = np.linalg.solve(G, rhs)
            yield xu - lam[0] * H1 - lam[1] * H2


def _check_pair(h1, h2):
    """Raise InfeasibleError for antiparallel normals with disjoint sides."""
    a1, a2 = h1.normal, h2.normal
    n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
    cos = float(a1 @ a2) / (n1 * n2)
    if cos <= -1 + PARALLEL_TOL:
        # {<u,x> <= b1/n1} and {<u,x> >= -b2/n2}
        lo, hi = -h2.offset / n2, h1.offset / n1
        if lo > hi + 1e-12 * max(1.0, abs(lo), abs(hi)):
            raise InfeasibleError("antiparallel halfspaces with disjoint sides")


def _minimize_quadratic(xu, solve, fval, hs):
    proper = [h for h in hs if not h.is_all_space]
    if len(proper) == 2:
        _check_pair(*proper)
    best, best_val = None, np.inf
    for cand in _candidates_two(xu, solve, proper):
        if all(h.contains(cand, tol=1e-10) for h in proper):
            v = fval(cand)
            if v < best_val:
                best, best_val = cand, v
    if best is None:
        # only reachable for degenerate (nearly parallel) pairs
        best = _iterate_two(lambda y: y - xu, 1.0, proper, xu, 1e-13, 100000)
    return best


def project_two_halfspaces(x, h1, h2=ALL_SPACE):
    """Exact projection onto ``h1 ∩ h2``."""
    x = np.asarray(x, dtype=float)
    in1, in2 = h1.contains(x), h2.contains(x)
    if in1 and in2:
        return x.copy()
    if not in1:
        y = h1.project(x)
        if h2.contains(y):
            return y
    if not in2:
        y = h2.project(x)
        if h1.contains(y):
            return y
    if not (h1.is_all_space or h2.is_all_space):
        a1, a2 = h1.normal, h2.normal
        G = np.array([[a1 @ a1, a1 @ a2], [a1 @ a2, a2 @ a2]])
        if abs(np.linalg.det(G)) > 1e-12 * G[0, 0] * G[1, 1]:
            lam = np.linalg.solve(G, np.array([a1 @ x - h1.offset, a2 @ x - h2.offset]))
            if lam[0] >= 0 and lam[1] >= 0:
                return x - lam[0] * a1 - lam[1] * a2
    return _minimize_quadratic(x, lambda v: v,
                               lambda y: float((y - x) @ (y - x)), [h1, h2])


def _iterate_two(grad, L, hs, x, tol, max_iter):
    for _ in range(max_iter):
        y = project_two_halfspaces(x - grad(x) / L, *hs) if hs else x - grad(x) / L
        if np.linalg.norm(y - x) <= tol:
            return y
        x = y
    raise MaxIterationsError("projected gradient did not reach the tolerance")


def minimize_two_halfspaces(f, h1, h2=ALL_SPACE, method="auto", tol=1e-12,
                            max_iter=1_000_000, x_start=None):
    """Minimize a strongly convex objective over ``h1 ∩ h2``.

    Quadratic objectives are handled exactly by enumerating the faces of
    the two-halfspace region.  ``method="iterative"`` (or any non-quadratic
    strongly convex objective) runs projected gradient until the
    gradient-mapping residual is below ``tol``.
    """
    if not f.strongly_convex:
        raise NotStronglyConvexError(f"objective kind {f.kind} has no strong-convexity modulus")
    hs = [h for h in (h1, h2) if not h.is_all_space]
    if len(hs) == 2:
        _check_pair(*hs)
    if method == "auto":
        method = "exact" if f.is_quadratic else "iterative"
    if method == "exact":
        return _minimize_quadratic(f.minimizer(), f.hess_solve, f.value, hs)
    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")
    x = f.minimizer() if x_start is None else np.asarray(x_start, dtype=float)
    return _iterate_two(f.gradient, f.lipschitz, hs, x, tol, max_iter)


def project_cone2(v, n1, n2):
    """Nearest point to ``v`` in the cone generated by ``n1`` and ``n2``."""
    v, n1, n2 = (np.asarray(a, dtype=float) for a in (v, n1, n2))
    cands = [np.zeros_like(v)]
    for n in (n1, n2):
        lam = float(v @ n) / float(n @ n)
        if lam > 0:
            cands.append(lam * n)
    G = np.array([[n1 @ n1, n1 @ n2], [n1 @ n2, n2 @ n2]])
    if np.linalg.det(G) > 1e-12 * G[0, 0] * G[1, 1]:
        lam = np.linalg.solve(G, np.array([v @ n1, v @ n2]))
        if np.all(lam >= 0):
            cands.append(lam[0] * n1 + lam[1] * n2)
    dists = [float(np.linalg.norm(v - c)) for c in cands]
    return cands[int(np.argmin(dists))]


def project_boundary_intersection(x, h1, h2):
    """Nearest point of ``{<a1,y> = b1, <a2,y> = b2}`` to ``x``."""
    if h1.is_all_space or h2.is_all_space:
        raise ValueError("boundary intersection needs two proper halfspaces")
    x = np.asarray(x, dtype=float)
    a1, a2 = h1.normal, h2.normal
    G = np.array([[a1 @ a1, a1 @ a2], [a1 @ a2, a2 @ a2]])
    if abs(np.linalg.det(G)) <= 1e-12 * G[0, 0] * G[1, 1]:
        # parallel normals: boundaries coincide or are disjoint
        t = float(a1 @ a2) / float(a1 @ a1)
        if abs(h2.offset - t * h1.offset) <= 1e-12 * max(1.0, abs(h2.offset)):
            return x - ((float(a1 @ x) - h1.offset) / float(a1 @ a1)) * a1
        raise EmptyIntersectionError("parallel halfspace boundaries do not meet")
    lam = np.linalg.solve(G, np.array([a1 @ x - h1.offset, a2 @ x - h2.offset]))
    return x - lam[0] * a1 - lam[1] * a2
