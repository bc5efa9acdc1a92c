"""Water content in a finite soil column from a linearised Richards equation.

The Burgers form of the flow equation is mapped by the Hopf-Cole transform to
a heat equation with a Robin condition at the base. Its solution is written
as a contour integral in the complex spectral plane and evaluated by adaptive
Gauss-Kronrod quadrature along a deformed path; a Crank-Nicolson solver and an
eigenfunction series serve as independent references.
"""

from .errors import (
    EarlyTimeError,
    FokasError,
    GeometryError,
    InstabilityError,
    InvalidParameterError,
    KernelZeroError,
    NonConvergenceError,
    NonPositiveWError,
    NumericalError,
    PoleOnContourError,
    StrategyMismatchError,
)
from .model import ColumnScenario, HopfColeConstants, SoilHydraulics, derive_constants, theta_from_w
from .oracle import FdConfig, build_series, cn_solve, series_solution, series_theta, truncation_study
from .solver import ContourConfig, FokasSolver, PoleStrategy, SolutionGrid, solve_grid, w_and_wx
from .spectral import IntegrandContext

__version__ = "0.1.0"

__all__ = [
    "ColumnScenario", "ContourConfig", "EarlyTimeError", "FdConfig", "FokasError", "FokasSolver",
    "GeometryError", "HopfColeConstants", "InstabilityError", "IntegrandContext",
    "InvalidParameterError", "KernelZeroError", "NonConvergenceError", "NonPositiveWError",
    "NumericalError", "PoleOnContourError", "PoleStrategy", "SoilHydraulics", "SolutionGrid",
    "StrategyMismatchError", "build_series", "cn_solve", "derive_constants", "series_solution",
    "series_theta", "solve_grid", "theta_from_w", "truncation_study", "w_and_wx",
]
