"""First-order solvers for convex problems with many inequality constraints."""
from .errors import (DimensionError, EmptyIntersectionError, FeasoptError, InfeasibleError,
                     InnerIterationLimit, MaxIterationsError, NotStronglyConvexError,
                     ProblemFormatError, SolverError)
from .fileformat import load_problem, parse_problem, serialize_problem
from .geometry import ALL_SPACE, ActiveSetState, Halfspace
from .model import (ConstraintFunction, ObjectiveFunction, Problem, SimpleSet,
                    eval_objective, gradient, subgradient)
from .trace import IterateTrace, TraceRow

__all__ = [
    "ALL_SPACE", "ActiveSetState", "ConstraintFunction", "DimensionError",
    "EmptyIntersectionError", "FeasoptError", "Halfspace", "InfeasibleError",
    "InnerIterationLimit", "IterateTrace", "MaxIterationsError", "NotStronglyConvexError",
    "ObjectiveFunction", "Problem", "ProblemFormatError", "SimpleSet", "SolverError",
    "TraceRow", "eval_objective", "gradient", "load_problem", "parse_problem",
    "serialize_problem", "subgradient",
]
