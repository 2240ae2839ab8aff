"""JSON problem files.

Schema::

    {
      "objective":   {"kind": "shifted-quadratic", "center": [...]}
                   | {"kind": "general-quadratic", "A": [[...]], "b": [...],
                      "mu": optional, "lipschitz": optional}
                   | {"kind": "pnorm-shift", "n": int, "p": even int},
      "constraints": [ {"kind": "affine", "a": [...], "b": float}
                     | {"kind": "dist-halfspace", "a": [...], "b": float}
                     | {"kind": "dist-ball", "center": [...], "radius": float}
                     | {"kind": "dist-box", "lower": [...], "upper": [...]}
                     | {"kind": "max-affine", "A": [[...]], "b": [...]} , ...],
      "q":           {"kind": "all-space"} | {"kind": "ball", ...} | {"kind": "box", ...},
      "diameter":    float > 0,
      "kappa":       float >= 1            (optional),
      "optimum":     {"point": [...], "value": float}   (optional)
    }

``q`` defaults to the whole space when omitted.  Floats are written with
``repr`` precision, so serialize/parse is an exact round trip.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import FeasoptError, ProblemFormatError
from .model import ConstraintFunction, ObjectiveFunction, Problem, SimpleSet

TOP_KEYS = {"objective", "constraints", "q", "diameter", "kappa", "optimum"}

_FIELDS = {
    "shifted-quadratic": ("center",),
    "general-quadratic": ("A", "b"),
    "pnorm-shift": ("n", "p"),
    "affine": ("a", "b"),
    "dist-halfspace": ("a", "b"),
    "dist-ball": ("center", "radius"),
    "dist-box": ("lower", "upper"),
    "max-affine": ("A", "b"),
    "all-space": (),
    "ball": ("center", "radius"),
    "box": ("lower", "upper"),
}
_OPTIONAL = {"general-quadratic": ("mu", "lipschitz")}


def _entry(obj, where, kinds):
    if not isinstance(obj, dict):
        raise ProblemFormatError(where, "expected an object")
    kind = obj.get("kind")
    if kind not in kinds:
        raise ProblemFormatError(f"{where}.kind", f"expected one of {sorted(kinds)}, got {kind!r}")
    allowed = set(_FIELDS[kind]) | set(_OPTIONAL.get(kind, ())) | {"kind"}
    for key in obj:
        if key not in allowed:
            raise ProblemFormatError(f"{where}.{key}", "unknown field")
    for key in _FIELDS[kind]:
        if key not in obj:
            raise ProblemFormatError(f"{where}.{key}", "missing field")
    return kind


def _build(where, factory, *args, **kw):
    try:
        return factory(*args, **kw)
    except ProblemFormatError:
        raise
    except (ValueError, TypeError, FeasoptError) as exc:
        raise ProblemFormatError(where, str(exc)) from None


def _objective(obj):
    kind = _entry(obj, "objective", {"shifted-quadratic", "general-quadratic", "pnorm-shift"})
    if kind == "shifted-quadratic":
        return _build("objective.center", ObjectiveFunction.shifted_quadratic, obj["center"])
    if kind == "general-quadratic":
        return _build("objective", ObjectiveFunction.general_quadratic, obj["A"], obj["b"],
                      mu=obj.get("mu"), lipschitz=obj.get("lipschitz"))
    return _build("objective", ObjectiveFunction.pnorm_shift, obj["n"], obj["p"])


def _constraint(obj, j):
    where = f"constraints[{j}]"
    kind = _entry(obj, where, {"affine", "dist-halfspace", "dist-ball", "dist-box", "max-affine"})
    factory = {
        "affine": ConstraintFunction.affine,
        "dist-halfspace": ConstraintFunction.dist_halfspace,
        "dist-ball": ConstraintFunction.dist_ball,
        "dist-box": ConstraintFunction.dist_box,
        "max-affine": ConstraintFunction.max_affine,
    }[kind]
    f1, f2 = _FIELDS[kind]
    if kind == "dist-ball" and not _positive(obj["radius"]):
        raise ProblemFormatError(f"{where}.radius", f"must be positive, got {obj['radius']!r}")
    return _build(where, factory, obj[f1], obj[f2])


def _positive(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0


def _simple_set(obj):
    kind = _entry(obj, "q", {"all-space", "ball", "box"})
    if kind == "all-space":
        return SimpleSet.all_space()
    if kind == "ball":
        if not _positive(obj["radius"]):
            raise ProblemFormatError("q.radius", f"must be positive, got {obj['radius']!r}")
        return _build("q", SimpleSet.ball, obj["center"], obj["radius"])
    return _build("q", SimpleSet.box, obj["lower"], obj["upper"])


def problem_from_dict(data):
    """Build a validated :class:`Problem` from decoded JSON data."""
    if not isinstance(data, dict):
        raise ProblemFormatError("<root>", "expected an object")
    for key in data:
        if key not in TOP_KEYS:
            raise ProblemFormatError(key, "unknown top-level field")
    for key in ("objective", "constraints", "diameter"):
        if key not in data:
            raise ProblemFormatError(key, "missing field")
    objective = _objective(data["objective"])
    cons = data["constraints"]
    if not isinstance(cons, list) or not cons:
        raise ProblemFormatError("constraints", "expected a nonempty list")
    constraints = [_constraint(c, j) for j, c in enumerate(cons)]
    q = _simple_set(data["q"]) if "q" in data else SimpleSet.all_space()
    R = data["diameter"]
    if not _positive(R):
        raise ProblemFormatError("diameter", f"must be a positive number, got {R!r}")
    kappa = data.get("kappa")
    if kappa is not None and (not isinstance(kappa, (int, float)) or kappa < 1):
        raise ProblemFormatError("kappa", f"must be a number >= 1, got {kappa!r}")
    optimum = None
    if "optimum" in data:
        opt = data["optimum"]
        if not isinstance(opt, dict) or set(opt) != {"point", "value"}:
            raise ProblemFormatError("optimum", "expected an object with 'point' and 'value'")
        optimum = (opt["point"], opt["value"])
    try:
        return Problem(objective, constraints, q, float(R), kappa, optimum)
    except ProblemFormatError:
        raise
    except (ValueError, TypeError, FeasoptError) as exc:
        raise ProblemFormatError("<root>", str(exc)) from None


def parse_problem(text):
    """Parse problem-file text into a :class:`Problem`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError("<json>", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(data)


def load_problem(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def problem_to_dict(p):
    f = p.objective
    obj = {"kind": f.kind, **{k: _plain(v) for k, v in f.params.items()}}
    if f.kind == "general-quadratic":
        obj["mu"], obj["lipschitz"] = f.mu, f.lipschitz
    data = {
        "objective": obj,
        "constraints": [{"kind": g.kind, **{k: _plain(v) for k, v in g.params.items()}}
                        for g in p.constraints],
        "q": {"kind": p.q.kind, **{k: _plain(v) for k, v in p.q.params.items()}},
        "diameter": p.diameter,
    }
    if p.kappa is not None:
        data["kappa"] = p.kappa
    if p.known_optimum is not None:
        data["optimum"] = {"point": _plain(p.known_optimum[0]), "value": p.known_optimum[1]}
    return data


def serialize_problem(p, indent=2):
    return json.dumps(problem_to_dict(p), indent=indent)
