"""Exception hierarchy shared across the package."""


class StarphaseError(Exception):
    """Base class for all package-specific errors."""


class DomainError(StarphaseError, ValueError):
    """A state or argument lies outside the model's admissible domain."""


class HypothesisError(StarphaseError, RuntimeError):
    """A structural hypothesis (ordering, sign condition, root existence)
    fails for the model at hand.  Carries the first violating point when
    one is known."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConvergenceError(StarphaseError, RuntimeError):
    """An iterative procedure exhausted its budget without converging."""
