"""Exception hierarchy for hsgap."""


class HeleShawError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HeleShawError, ValueError):
    """An argument lies outside the domain of a function (h <= 0, k >= 1, ...)."""


class PreconditionError(HeleShawError, ValueError):
    """A documented precondition does not hold (point in wrong region, off-boundary point)."""


class CutError(HeleShawError, ValueError):
    """Evaluation requested on a branch cut; use a one-sided limit instead."""


class SingularPointError(HeleShawError, ValueError):
    """Evaluation requested at a branch point or pole."""


class TopologyError(HeleShawError):
    """The interface left its family (e.g. a Cassini oval split into two ovals)."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class AccuracyError(HeleShawError, ArithmeticError):
    """A numerical routine failed to reach the requested tolerance.

    The best available estimate is attached as ``estimate``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class BracketError(HeleShawError, ValueError):
    """Root-finding interval does not bracket a sign change."""


class StiffnessError(HeleShawError, ArithmeticError):
    """ODE step size underflowed before the refinement criterion was met."""


class BranchError(HeleShawError, ArithmeticError):
    """An inverse-trigonometric argument left [-1, 1] beyond rounding; cuts are mis-specified."""


class IndeterminateDirectionError(HeleShawError, ArithmeticError):
    """A cut direction cannot be computed because the local coefficient vanishes."""


class ConfigError(HeleShawError, ValueError):
    """A scenario document is malformed."""
