"""Exception types shared across the package."""


class CapacityError(ValueError):
    """A requested table size or truncation exceeds the configured capacity."""


class RangeError(ValueError):
    """An argument lies outside the range covered by the supplied tables."""


class DomainError(ValueError):
    """An argument violates a mathematical precondition of the operation."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge to the requested tolerance.

    The best available estimate is attached as ``estimate``.
    """

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate
