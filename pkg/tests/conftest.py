import numpy as np
import pytest

from fokas_richards.model import ColumnScenario, SoilHydraulics
from fokas_richards.solver import FokasSolver
from fokas_richards.spectral import IntegrandContext

SOIL = SoilHydraulics(a=9.88e-5, b=-0.0065, D=3.51e-7)
EX1 = ColumnScenario(L=0.25, q=3.4e-6, theta0=0.03, thetaL=0.03)
EX2 = ColumnScenario(L=0.08, q=0.0, theta0=0.355, thetaL=0.10)


@pytest.fixture(scope="session")
def ctx1():
    return IntegrandContext.from_params(SOIL, EX1)


@pytest.fixture(scope="session")
def ctx2():
    return IntegrandContext.from_params(SOIL, EX2)


@pytest.fixture(scope="session")
def solver1(ctx1):
    return FokasSolver(ctx1)


@pytest.fixture(scope="session")
def solver2(ctx2):
    return FokasSolver(ctx2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
