"""Exception types shared across the package."""

from __future__ import annotations


class WronskitError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidInputError(WronskitError):
    pass


class NotMonicError(WronskitError):
    pass


class LinearlyDependentError(WronskitError):
    pass


class PrecisionExhaustedError(WronskitError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentCountError(WronskitError):
    """Two independent routes to the same number disagree."""


class IncompleteProblemError(WronskitError):
    """Schubert conditions do not add up to the dimension of the Grassmannian."""


class EnumerationCapError(WronskitError):
    pass


class NonGenericPathError(WronskitError):
    pass


class NearDegenerateError(WronskitError):
    pass


class UnsupportedInputError(WronskitError):
    pass


class PathThroughDiscriminantError(WronskitError):
    pass


class SolverFailureError(WronskitError):
    pass


class SingularConfigurationError(WronskitError):
    """Two variables coincide, so a factor of the master function vanishes."""


class HypothesesNotMetError(WronskitError):
    pass


class NotCriticalPointError(WronskitError):
    pass


class IncompleteSolveError(WronskitError):
    def __init__(self, message: str, found: int = 0, expected: int = 0):
        super().__init__(message)
        self.found = found
        self.expected = expected
