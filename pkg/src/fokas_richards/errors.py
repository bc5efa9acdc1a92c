"""Exception hierarchy shared by the solver, oracles and CLI."""


class FokasError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(FokasError, ValueError):
    """Soil or scenario parameters violate a model invariant."""


class NonPositiveWError(FokasError, ArithmeticError):
    """The Hopf-Cole variable w is not strictly positive."""


class NumericalError(FokasError, ArithmeticError):
    """Base for failures of the numerical machinery."""


class KernelZeroError(NumericalError):
    """Delta(lambda, -L) vanished at an evaluation point."""


class PoleOnContourError(NumericalError):
    """D lambda^2 + B vanished at an evaluation point."""


class GeometryError(FokasError, ValueError):
    """A contour cannot be built for the given constants."""


class EarlyTimeError(NumericalError):
    """Time too small for the Gaussian decay to allow leg truncation."""


class NonConvergenceError(NumericalError):
    """Adaptive quadrature hit its panel cap above tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class StrategyMismatchError(FokasError, ValueError):
    """The requested pole strategy is not valid for the parameters."""


class InstabilityError(NumericalError):
    """The finite-difference oracle produced a non-positive w."""
