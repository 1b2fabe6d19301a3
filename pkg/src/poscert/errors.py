class PoscertError(Exception):
    """Base class for every error raised by the package."""


class DomainError(PoscertError, ValueError):
    """An argument is outside the operation's domain (zero polynomial, p <= 0, ...)."""


class ResourceError(PoscertError, RuntimeError):
    """A problem exceeds the configured size budget."""


class ConvergenceError(PoscertError, RuntimeError):
    """Root iteration did not converge; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InvariantViolation(PoscertError, AssertionError):
    """A construction that must succeed by theory did not. Never swallowed."""
