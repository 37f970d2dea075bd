class QuenchError(Exception):

    """Base class for every error raised deliberately by this package."""


class NumericalError(QuenchError, ArithmeticError):

    """A computation finished without reaching the accuracy it was asked for."""


class ConvergenceError(NumericalError):

    """
    A quadrature, series or sum did not converge within its evaluation budget.

    Attributes:
        best_estimate:      The last value computed before giving up.
        error_estimate:     The error estimate attached to `best_estimate`.
        evaluations:        Integrand evaluations (or series terms) spent.
    """

    def __init__(
        self,
        message: str,
        *,
        best_estimate: complex | float = float("nan"),
        error_estimate: float = float("inf"),
        evaluations: int = 0,
    ) -> None:
        """
        Constructor...

        Args:
            message:
                Human readable description of the failure.
            best_estimate:
                The last value computed before giving up.
            error_estimate:
                The error estimate attached to `best_estimate`.
            evaluations:
                Integrand evaluations (or series terms) spent.
        """

        super().__init__(message)
        self.best_estimate: complex | float = best_estimate
        self.error_estimate: float = error_estimate
        self.evaluations: int = evaluations


class ResolutionError(NumericalError):

    """The continuum momentum grid is too coarse to reproduce the initial state."""

    def __init__(self, message: str, *, defect: float) -> None:
        super().__init__(message)
        self.defect: float = defect


class DomainTooSmallError(NumericalError):

    """The wave function reached the edge of the spatial grid."""

    def __init__(self, message: str, *, leakage: float, time: float) -> None:
        super().__init__(message)
        self.leakage: float = leakage
        self.time: float = time


class BranchError(NumericalError):

    """A product of complex powers was not real on the principal branch."""


class TruncationError(NumericalError):

    """A truncated spectrum drops more probability than allowed."""

    def __init__(self, message: str, *, tail: float, suggested_n_max: int) -> None:
        super().__init__(message)
        self.tail: float = tail
        self.suggested_n_max: int = suggested_n_max
