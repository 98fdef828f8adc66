"""Exception types raised across the package."""


class RejectedGridSize(ValueError):
    """Node count cannot carry the stencils or composite Simpson quadrature."""


class BoundaryIndex(IndexError):
    """A pointwise interior stencil was requested on a wall node."""


class BadSampleCount(ValueError):
    """Composite Simpson needs an odd number (>= 3) of samples."""


class NoPrimaryVortex(ValueError):
    """No streamfunction extremum qualifies as the primary vortex."""


class FormatError(ValueError):
    """Malformed field dump; ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(ValueError):
    """Bad command-line usage; the message names the offending flag."""


class Diverged(ArithmeticError):
    """A relaxation sweep produced a non-finite value."""

    def __init__(self, message, iterations=None):
        self.iterations = iterations
        # filled by continuation_sweep with the outcomes finished before the blow-up
        self.completed = {}
        super().__init__(message)


class NotConverged(RuntimeError):
    """Iteration budget exhausted before the residual criterion was met.

    The partial :class:`~drivencavity.solver.SolveOutcome` is kept on
    ``outcome`` so callers can still write fields and logs.
    """

    def __init__(self, outcome):
        self.outcome = outcome
        super().__init__(
            f"not converged after {outcome.iterations} iterations")
