"""Physical parameters, Hopf-Cole constants and the map back to water content.

All quantities are SI: metres, seconds, volumetric water content (m^3/m^3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NonPositiveWError


@dataclass(frozen=True)
class SoilHydraulics:
    """Quadratic-conductivity soil, K(theta) = a (theta + b)^2, constant D.

    Parameters
    ----------
    a : float
        Conductivity coefficient (m/s).
    b : float
        Moisture offset (m^3/m^3); may be negative.
    D : float
        Soil water diffusivity (m^2/s).
    """

    a: float
    b: float
    D: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise InvalidParameterError(f"a must be positive, got {self.a!r}")
        if not (self.D > 0 and math.isfinite(self.D)):
            raise InvalidParameterError(f"D must be positive, got {self.D!r}")
        if not math.isfinite(self.b):
            raise InvalidParameterError(f"b must be finite, got {self.b!r}")

    @property
    def ratio(self) -> float:
        """a / D, the Hopf-Cole scale (1/m per unit water content)."""
        return self.a / self.D


@dataclass(frozen=True)
class ColumnScenario:
    """Finite soil column with constant surface flux and fixed bottom moisture.

    Parameters
    ----------
    L : float
        Column length (m).
    q : float
        Constant surface flux (m/s), q >= 0.
    theta0 : float
        Initial water content.
    thetaL : float
        Water content held at the bottom x = L.
    """

    L: float
    q: float
    theta0: float
    thetaL: float

    def __post_init__(self) -> None:
        if not (self.L > 0 and math.isfinite(self.L)):
            raise InvalidParameterError(f"L must be positive, got {self.L!r}")
        if not (self.q >= 0 and math.isfinite(self.q)):
            # negative flux would make gamma imaginary
            raise InvalidParameterError(f"q must be >= 0 (no evaporation), got {self.q!r}")
        if not self.thetaL > 0:
            raise InvalidParameterError(f"thetaL must be positive, got {self.thetaL!r}")
        if not self.theta0 >= self.thetaL:
            raise InvalidParameterError(
                f"theta0 ({self.theta0!r}) must be >= thetaL ({self.thetaL!r})"
            )


@dataclass(frozen=True)
class HopfColeConstants:
    """Constants of the transformed heat problem.

    ``A`` is the decay rate of the initial profile exp(-A x), ``B`` the growth
    rate of the Dirichlet datum exp(B t), ``C`` the Robin coefficient at x = L
    and ``gamma = sqrt(B / D)`` the modulus of the pole at i*gamma.
    """

    A: float
    B: float
    C: float
    gamma: float


def derive_constants(soil: SoilHydraulics, scen: ColumnScenario) -> HopfColeConstants:
    """Compute A, B, C and gamma for a soil/column pair.

    Raises
    ------
    InvalidParameterError
        If ``theta0 + b <= 0`` or ``thetaL + b <= 0``.
    """
    if scen.theta0 + soil.b <= 0:
        raise InvalidParameterError("theta0 + b must be positive (A > 0)")
    if scen.thetaL + soil.b <= 0:
        raise InvalidParameterError("thetaL + b must be positive (C > 0)")
    k = soil.ratio
    B = k * scen.q
    return HopfColeConstants(
        A=k * (scen.theta0 + soil.b),
        B=B,
        C=k * (scen.thetaL + soil.b),
        gamma=math.sqrt(B / soil.D),
    )


def w0_of_x(x, c: HopfColeConstants):
    """Initial datum w(x, 0) = exp(-A x)."""
    return np.exp(-c.A * np.asarray(x, dtype=float))


def f_of_t(t, c: HopfColeConstants):
    """Dirichlet datum w(0, t) = exp(B t)."""
    return np.exp(c.B * np.asarray(t, dtype=float))


def theta_from_w(w, wx, soil: SoilHydraulics):
    """Water content from the Hopf-Cole variable: -(D/a) wx / w - b.

    Raises
    ------
    NonPositiveWError
        If any ``w <= 0``.
    """
    w = np.asarray(w, dtype=float)
    wx = np.asarray(wx, dtype=float)
    if np.any(~(w > 0)):
        raise NonPositiveWError("w must be strictly positive to invert Hopf-Cole")
    return -(soil.D / soil.a) * (wx / w) - soil.b


def conductivity(theta, soil: SoilHydraulics):
    """Hydraulic conductivity a (theta + b)^2 in m/s."""
    return soil.a * (np.asarray(theta, dtype=float) + soil.b) ** 2
