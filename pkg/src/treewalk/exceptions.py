class InvalidSpecError(ValueError):
    """Raised when a graph, state or run configuration is malformed."""


class ConvergenceError(RuntimeError):
    """Raised when the eigensolver exhausts its sweep budget.

    The off-diagonal Frobenius norm reached is kept in ``off_norm``.
    """

    def __init__(self, message, off_norm):
        super().__init__(message)
        self.off_norm = off_norm


class InvariantViolation(RuntimeError):
    """Raised when an integration leaves the physical state space."""
