"""Problem data: objectives, constraint functions, simple sets.

Every function family here comes with exact value, gradient/subgradient and
(where meaningful) projection oracles.  Instances are immutable; arrays are
stored as read-only copies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, ProblemFormatError

EIG_TOL = 1e-8

OBJECTIVE_KINDS = ("shifted-quadratic", "general-quadratic", "pnorm-shift")
CONSTRAINT_KINDS = ("affine", "dist-halfspace", "dist-ball", "dist-box",
                    "max-affine")
SET_KINDS = ("all-space", "ball", "box")


def _frozen(a, ndim=1, name="array"):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _point(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionError(f"expected a point of dimension {n}, got shape {x.shape}")
    return x


def _params_equal(p, q):
    if p.keys() != q.keys():
        return False
    for key in p:
        a, b = p[key], q[key]
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            if not np.array_equal(np.asarray(a), np.asarray(b)):
                return False
        elif a != b:
            return False
    return True


# --------------------------------------------------------------------------
# objectives


@dataclass(frozen=True, eq=False)
class ObjectiveFunction:
    """Convex differentiable objective.

    Build instances through :meth:`shifted_quadratic`,
    :meth:`general_quadratic` or :meth:`pnorm_shift`.  ``mu`` and
    ``lipschitz`` are the strong-convexity modulus and the Lipschitz constant
    of the gradient; both are ``None`` for functions outside the
    strongly-convex/smooth class.
    """

    kind: str
    params: dict
    mu: float | None = None
    lipschitz: float | None = None

    @classmethod
    def shifted_quadratic(cls, center):
        """``1/2 ||x - center||^2``."""
        return cls("shifted-quadratic", {"center": _frozen(center, name="center")},
                   1.0, 1.0)

    @classmethod
    def general_quadratic(cls, A, b, mu=None, lipschitz=None):
        """``1/2 x^T A x + b^T x`` with ``A`` symmetric positive definite.

        ``mu`` and ``lipschitz`` default to the extreme eigenvalues of ``A``;
        supplied values must agree with them to within 1e-8 (relative).
        """
        A = _frozen(A, ndim=2, name="A")
        b = _frozen(b, name="b")
        n = b.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be {n}x{n}, got {A.shape}")
        if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
            raise ValueError("A must be symmetric")
        off = A - np.diag(np.diag(A))
        if not off.any():
            eig = np.sort(np.diag(A))
        else:
            eig = np.linalg.eigvalsh(A)
        lo, hi = float(eig[0]), float(eig[-1])
        if lo <= 0:
            raise ValueError("A must be positive definite")
        for given, true, label in ((mu, lo, "mu"), (lipschitz, hi, "lipschitz")):
            if given is not None and abs(given - true) > EIG_TOL * max(1.0, abs(true)):
                raise ValueError(f"{label}={given} does not match eigenvalue {true}")
        return cls("general-quadratic", {"A": A, "b": b},
                   lo if mu is None else float(mu),
                   hi if lipschitz is None else float(lipschitz))

    @classmethod
    def pnorm_shift(cls, n, p):
        """``||e_1 - x||_p^p`` for a positive even integer ``p``.

        For ``p = 2`` this is the quadratic ``||e_1 - x||^2`` and carries
        ``mu = lipschitz = 2``; for larger ``p`` it is neither strongly convex
        nor globally smooth and both moduli are ``None``.
        """
        if int(p) != p or p < 2 or int(p) % 2:
            raise ValueError(f"p must be a positive even integer, got {p}")
        if int(n) != n or n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        p, n = int(p), int(n)
        if p == 2:
            return cls("pnorm-shift", {"n": n, "p": p}, 2.0, 2.0)
        return cls("pnorm-shift", {"n": n, "p": p}, None, None)

    # ---- oracles

    @property
    def dim(self):
        if self.kind == "shifted-quadratic":
            return self.params["center"].shape[0]
        if self.kind == "general-quadratic":
            return self.params["b"].shape[0]
        return self.params["n"]

    @property
    def strongly_convex(self):
        return self.mu is not None and self.mu > 0

    def value(self, x):
        x = _point(x, self.dim)
        if self.kind == "shifted-quadratic":
            d = x - self.params["center"]
            return 0.5 * float(d @ d)
        if self.kind == "general-quadratic":
            b = self.params["b"]
            d = self._diag
            Ax = d * x if d is not None else self.params["A"] @ x
            return 0.5 * float(x @ Ax) + float(b @ x)
        r = -x
        r[0] += 1.0
        return float(np.sum(r ** self.params["p"]))

    def gradient(self, x):
        x = _point(x, self.dim)
        if self.kind == "shifted-quadratic":
            return x - self.params["center"]
        if self.kind == "general-quadratic":
            d = self._diag
            Ax = d * x if d is not None else self.params["A"] @ x
            return Ax + self.params["b"]
        p = self.params["p"]
        r = -x
        r[0] += 1.0
        return -p * r ** (p - 1)

    def minimizer(self):
        """Unconstrained minimizer, computed in closed form."""
        if self.kind == "shifted-quadratic":
            return self.params["center"].copy()
        if self.kind == "general-quadratic":
            return -self.hess_solve(self.params["b"])
        e = np.zeros(self.dim)
        e[0] = 1.0
        return e

    def quadratic_form(self):
        """``(A, b)`` with ``f(x) = 1/2 x^T A x + b^T x + const``, or None."""
        if self.kind == "shifted-quadratic":
            return np.eye(self.dim), -self.params["center"]
        if self.kind == "general-quadratic":
            return self.params["A"], self.params["b"]
        if self.params["p"] == 2:
            e = np.zeros(self.dim)
            e[0] = 1.0
            return 2.0 * np.eye(self.dim), -2.0 * e
        return None

    @property
    def is_quadratic(self):
        return self.kind != "pnorm-shift" or self.params["p"] == 2

    @cached_property
    def _diag(self):
        A = self.params.get("A")
        if A is None or (A - np.diag(np.diag(A))).any():
            return None
        return np.diag(A).copy()

    @cached_property
    def _hess_factor(self):
        import scipy.linalg as sla

        if self.kind == "shifted-quadratic":
            return ("diag", np.ones(self.dim))
        if self.kind == "pnorm-shift":
            return ("diag", np.full(self.dim, 2.0))
        A = self.params["A"]
        if not (A - np.diag(np.diag(A))).any():
            return ("diag", np.diag(A).copy())
        return ("chol", sla.cho_factor(A))

    def hess_solve(self, rhs):
        """Solve ``A y = rhs`` for the Hessian ``A`` of a quadratic objective."""
        if not self.is_quadratic:
            raise ValueError("hess_solve needs a quadratic objective")
        import scipy.linalg as sla

        how, fac = self._hess_factor
        rhs = np.asarray(rhs, dtype=float)
        if how == "diag":
            return rhs / (fac if rhs.ndim == 1 else fac[:, None])
        return sla.cho_solve(fac, rhs)

    def __eq__(self, other):
        if not isinstance(other, ObjectiveFunction):
            return NotImplemented
        return (self.kind == other.kind and self.mu == other.mu
                and self.lipschitz == other.lipschitz
                and _params_equal(self.params, other.params))

    __hash__ = object.__hash__


def eval_objective(f, x):
    return f.value(x)


def gradient(f, x):
    return f.gradient(x)


# --------------------------------------------------------------------------
# constraints


@dataclass(frozen=True, eq=False)
class ConstraintFunction:
    """Convex constraint ``g(x) <= 0`` with an exact subgradient oracle.

    Kinds
    -----
    affine
        ``<a, x> - b``.
    dist-halfspace
        distance to ``{y : <a, y> <= b}``.
    dist-ball
        distance to the closed ball ``B(center, radius)``.
    dist-box
        distance to the box ``[lower, upper]``.
    max-affine
        ``max_i (<A_i, x> - b_i)``; the subgradient picks the lowest index
        attaining the maximum.
    """

    kind: str
    params: dict

    @classmethod
    def affine(cls, a, b):
        a = _frozen(a, name="a")
        if not np.any(a):
            raise ValueError("affine constraint needs a nonzero normal")
        return cls("affine", {"a": a, "b": float(b)})

    @classmethod
    def dist_halfspace(cls, a, b):
        a = _frozen(a, name="a")
        if not np.any(a):
            raise ValueError("halfspace needs a nonzero normal")
        return cls("dist-halfspace", {"a": a, "b": float(b)})

    @classmethod
    def dist_ball(cls, center, radius):
        if not radius > 0:
            raise ValueError("radius must be positive")
        return cls("dist-ball", {"center": _frozen(center, name="center"),
                                 "radius": float(radius)})

    @classmethod
    def dist_box(cls, lower, upper):
        lower, upper = _frozen(lower, name="lower"), _frozen(upper, name="upper")
        if lower.shape != upper.shape or np.any(lower > upper):
            raise ValueError("box needs lower <= upper of equal shape")
        return cls("dist-box", {"lower": lower, "upper": upper})

    @classmethod
    def max_affine(cls, A, b):
        A = _frozen(A, ndim=2, name="A")
        b = _frozen(b, name="b")
        if A.shape[0] != b.shape[0] or A.shape[0] == 0:
            raise DimensionError("max-affine needs matching nonempty A, b")
        return cls("max-affine", {"A": A, "b": b})

    @property
    def dim(self):
        k = self.kind
        if k in ("affine", "dist-halfspace"):
            return self.params["a"].shape[0]
        if k == "dist-ball":
            return self.params["center"].shape[0]
        if k == "dist-box":
            return self.params["lower"].shape[0]
        return self.params["A"].shape[1]

    def project(self, x):
        """Projection onto the zero sublevel set ``{y : g(y) <= 0}``."""
        x = _point(x, self.dim)
        k = self.kind
        if k in ("affine", "dist-halfspace"):
            a, b = self.params["a"], self.params["b"]
            s = a @ x - b
            return x - (s / (a @ a)) * a if s > 0 else x.copy()
        if k == "dist-ball":
            c, r = self.params["center"], self.params["radius"]
            d = np.linalg.norm(x - c)
            return c + (r / d) * (x - c) if d > r else x.copy()
        if k == "dist-box":
            return np.clip(x, self.params["lower"], self.params["upper"])
        raise NotImplementedError("no closed-form projection for max-affine")

    def value(self, x):
        x = _point(x, self.dim)
        k = self.kind
        if k == "affine":
            return float(self.params["a"] @ x - self.params["b"])
        if k == "max-affine":
            return float(np.max(self.params["A"] @ x - self.params["b"]))
        if k == "dist-halfspace":
            a = self.params["a"]
            return max(0.0, float(a @ x - self.params["b"])) / float(np.linalg.norm(a))
        if k == "dist-ball":
            d = float(np.linalg.norm(x - self.params["center"]))
            return max(0.0, d - self.params["radius"])
        return float(np.linalg.norm(x - self.project(x)))

    def subgradient(self, x):
        x = _point(x, self.dim)
        k = self.kind
        if k == "affine":
            return self.params["a"].copy()
        if k == "max-affine":
            i = int(np.argmax(self.params["A"] @ x - self.params["b"]))
            return self.params["A"][i].copy()
        if k == "dist-halfspace":
            a = self.params["a"]
            if a @ x - self.params["b"] > 0:
                return a / np.linalg.norm(a)
            return np.zeros_like(x)
        if k == "dist-ball":
            d = x - self.params["center"]
            nd = np.linalg.norm(d)
            if nd > self.params["radius"]:
                return d / nd
            return np.zeros_like(x)
        d = x - self.project(x)
        nd = np.linalg.norm(d)
        return d / nd if nd > 0 else np.zeros_like(x)

    def halfspace_rows(self):
        """``(A, b)`` describing the feasible set as ``A y <= b``, if polyhedral."""
        if self.kind in ("affine", "dist-halfspace"):
            return self.params["a"][None, :], np.array([self.params["b"]])
        if self.kind == "max-affine":
            return self.params["A"], self.params["b"]
        if self.kind == "dist-box":
            n = self.dim
            eye = np.eye(n)
            return (np.vstack([eye, -eye]),
                    np.concatenate([self.params["upper"], -self.params["lower"]]))
        return None

    def __eq__(self, other):
        if not isinstance(other, ConstraintFunction):
            return NotImplemented
        return self.kind == other.kind and _params_equal(self.params, other.params)

    __hash__ = object.__hash__


def subgradient(g, x):
    return g.subgradient(x)


# --------------------------------------------------------------------------
# simple sets and problems


@dataclass(frozen=True, eq=False)
class SimpleSet:
    """The set ``Q``: whole space, a ball, or a box, with exact projection."""

    kind: str = "all-space"
    params: dict = field(default_factory=dict)

    @classmethod
    def all_space(cls):
        return cls("all-space", {})

    @classmethod
    def ball(cls, center, radius):
        if not radius > 0:
            raise ValueError("radius must be positive")
        return cls("ball", {"center": _frozen(center, name="center"),
                            "radius": float(radius)})

    @classmethod
    def box(cls, lower, upper):
        lower, upper = _frozen(lower, name="lower"), _frozen(upper, name="upper")
        if lower.shape != upper.shape or np.any(lower > upper):
            raise ValueError("box needs lower <= upper of equal shape")
        return cls("box", {"lower": lower, "upper": upper})

    @property
    def dim(self):
        if self.kind == "ball":
            return self.params["center"].shape[0]
        if self.kind == "box":
            return self.params["lower"].shape[0]
        return None

    def project(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "ball":
            c, r = self.params["center"], self.params["radius"]
            d = np.linalg.norm(x - c)
            return c + (r / d) * (x - c) if d > r else x.copy()
        if self.kind == "box":
            return np.clip(x, self.params["lower"], self.params["upper"])
        return x.copy()

    def contains(self, x, tol=1e-9):
        return float(np.linalg.norm(self.project(x) - np.asarray(x))) <= tol

    def __eq__(self, other):
        if not isinstance(other, SimpleSet):
            return NotImplemented
        return self.kind == other.kind and _params_equal(self.params, other.params)

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class Problem:
    """``min f(x)`` subject to ``g_j(x) <= 0`` for all ``j`` and ``x`` in ``q``.

    ``diameter`` is the bound ``R`` used by the subgradient step sizes,
    ``kappa`` an optional linear-regularity constant and ``known_optimum``
    an optional ``(point, value)`` pair used by the verification harness.
    """

    objective: ObjectiveFunction
    constraints: tuple
    q: SimpleSet = field(default_factory=SimpleSet.all_space)
    diameter: float = 1.0
    kappa: float | None = None
    known_optimum: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = self.objective.dim
        if len(self.constraints) < 1:
            raise ProblemFormatError("constraints", "at least one constraint is required")
        for j, g in enumerate(self.constraints):
            if g.dim != n:
                raise ProblemFormatError(
                    f"constraints[{j}]", f"dimension {g.dim} does not match objective dimension {n}")
        if self.q.dim is not None and self.q.dim != n:
            raise ProblemFormatError("q", f"dimension {self.q.dim} does not match {n}")
        if not (np.isfinite(self.diameter) and self.diameter > 0):
            raise ProblemFormatError("diameter", f"must be positive, got {self.diameter}")
        object.__setattr__(self, "diameter", float(self.diameter))
        if self.kappa is not None:
            if not self.kappa >= 1:
                raise ProblemFormatError("kappa", f"must be >= 1, got {self.kappa}")
            object.__setattr__(self, "kappa", float(self.kappa))
        if self.known_optimum is not None:
            point, value = self.known_optimum
            point = _frozen(point, name="optimum.point")
            if point.shape != (n,):
                raise ProblemFormatError("optimum.point", f"must have dimension {n}")
            worst = max(g.value(point) for g in self.constraints)
            if worst > 1e-9:
                raise ProblemFormatError(
                    "optimum.point", f"violates a constraint by {worst:.3g}")
            object.__setattr__(self, "known_optimum", (point, float(value)))

    @property
    def dim(self):
        return self.objective.dim

    @property
    def m(self):
        return len(self.constraints)

    @cached_property
    def affine_block(self):
        """Stacked ``(A, b)`` when every constraint is affine, else None."""
        if all(g.kind == "affine" for g in self.constraints):
            A = np.array([g.params["a"] for g in self.constraints])
            b = np.array([g.params["b"] for g in self.constraints])
            return A, b
        return None

    def constraint_values(self, x):
        block = self.affine_block
        if block is not None:
            A, b = block
            return A @ np.asarray(x, dtype=float) - b
        return np.array([g.value(x) for g in self.constraints])

    def max_violation(self, x):
        return max(0.0, float(np.max(self.constraint_values(x))))

    def polyhedral_form(self):
        """``(A, b)`` with ``C = {x : A x <= b}``; raises if some set is curved."""
        rows, rhs = [], []
        for j, g in enumerate(self.constraints):
            hr = g.halfspace_rows()
            if hr is None:
                raise ValueError(f"constraint {j} ({g.kind}) is not polyhedral")
            rows.append(hr[0])
            rhs.append(hr[1])
        return np.vstack(rows), np.concatenate(rhs)

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        if (self.objective != other.objective or self.constraints != other.constraints
                or self.q != other.q or self.diameter != other.diameter
                or self.kappa != other.kappa):
            return False
        if (self.known_optimum is None) != (other.known_optimum is None):
            return False
        if self.known_optimum is not None:
            return (np.array_equal(self.known_optimum[0], other.known_optimum[0])
                    and self.known_optimum[1] == other.known_optimum[1])
        return True

    __hash__ = object.__hash__
