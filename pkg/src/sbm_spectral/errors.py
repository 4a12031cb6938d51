"""Exception types shared across the package."""


class SbmError(Exception):
    """Base class for all package errors."""


class ParameterError(SbmError, ValueError):
    """A model parameter lies outside its valid domain."""


class NumericalError(SbmError, ArithmeticError):
    """An iterative method failed to reach its tolerance.

    ``residual`` is the best residual achieved and ``best`` the iterate that
    achieved it (when available).
    """

    def __init__(self, message, residual=None, best=None):
        super().__init__(message)
        self.residual = residual
        self.best = best


class DegenerateProjectionError(SbmError, ArithmeticError):
    """The all-ones vector has (numerically) no component in the eigenspace."""


class ContractError(SbmError, ValueError):
    """An input violates a documented precondition."""


class InsufficientDataError(SbmError, ValueError):
    """Too few usable points for a fit."""
