"""Exception types raised by the library."""


class QMeixnerError(Exception):
    """Base class for numerical failures in this package."""


class InvalidTimeOrder(QMeixnerError, ValueError):
    """Raised when a transition is requested for times not satisfying 0 <= s < t."""


class InvalidTime(QMeixnerError, ValueError):
    """Raised when a time argument must be strictly positive but is not."""


class NonPositiveRecurrence(QMeixnerError, ValueError):
    """Raised when a Jacobi matrix needs b_n > 0 and the recurrence violates it."""

    def __init__(self, n, value):
        self.n = n
        self.value = value
        super().__init__(f"recurrence coefficient b_{n} = {value!r} is not positive")


class NoConvergence(QMeixnerError, ArithmeticError):
    """Raised when the tridiagonal eigensolver exceeds its sweep budget."""
