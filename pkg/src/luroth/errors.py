"""Exception types raised across the package."""


class LurothError(Exception):
    """Base class for domain errors."""


class VariableMismatch(LurothError, ValueError):
    pass


class ArityMismatch(LurothError, ValueError):
    pass


class NotSquareError(LurothError, ValueError):
    pass


class NotSkewError(LurothError, ValueError):
    pass


class NoConvergence(LurothError, ArithmeticError):
    """A numeric stage failed to reach the requested accuracy."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class DegenerateInput(LurothError, ValueError):
    """Input violates a genericity condition (coincident points, dependent forms...)."""


class InvalidSurface(LurothError, ValueError):
    """Coefficients do not define an admissible nonsingular hexahedral surface."""

    def __init__(self, message, guard):
        super().__init__(message)
        self.guard = guard
