"""Exception types raised by the solvers and parsers."""


class FeasoptError(Exception):
    """Base class for all library errors."""


class DimensionError(FeasoptError, ValueError):
    pass


class ProblemFormatError(FeasoptError, ValueError):
    """A problem file or problem definition violates the schema or an invariant.

    ``field`` holds the dotted location of the offending entry, e.g.
    ``constraints[2].radius``.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class SolverError(FeasoptError):
    """Raised when an algorithm cannot continue."""


class InfeasibleError(SolverError):
    pass


class EmptyIntersectionError(SolverError):
    pass


class NotStronglyConvexError(SolverError):
    pass


class MaxIterationsError(SolverError):
    """Iteration cap reached; ``state`` carries the partial solver state."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class InnerIterationLimit(SolverError):
    """The inner projected-gradient loop hit its cap at outer iteration ``outer``."""

    def __init__(self, outer, cap):
        self.outer = outer
        self.cap = cap
        super().__init__(
            f"inner iteration cap {cap} exceeded at outer iteration {outer}")
