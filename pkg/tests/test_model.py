import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fokas_richards.errors import InvalidParameterError, NonPositiveWError
from fokas_richards.model import (
    ColumnScenario,
    SoilHydraulics,
    conductivity,
    derive_constants,
    f_of_t,
    theta_from_w,
    w0_of_x,
)

from .conftest import EX1, EX2, SOIL


def test_example1_constants():
    c = derive_constants(SOIL, EX1)
    assert c.A == pytest.approx(6.6, abs=0.05)
    assert c.gamma == pytest.approx(52.2, abs=0.05)
    assert c.A == c.C


def test_example2_constants():
    c = derive_constants(SOIL, EX2)
    assert c.B == 0.0 and c.gamma == 0.0
    assert c.A == pytest.approx(98.1, abs=0.05)
    assert c.C == pytest.approx(26.3, abs=0.05)


def test_exact_inverse_identities():
    for scen in (EX1, EX2):
        c = derive_constants(SOIL, scen)
        assert c.A * SOIL.D / SOIL.a - SOIL.b == pytest.approx(scen.theta0, rel=1e-15)
        assert c.C * SOIL.D / SOIL.a - SOIL.b == pytest.approx(scen.thetaL, rel=1e-15)
        assert c.gamma**2 * SOIL.D == pytest.approx(c.B, rel=1e-15, abs=0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(L=0.25, q=-1e-6, theta0=0.03, thetaL=0.03),
        dict(L=0.0, q=0.0, theta0=0.03, thetaL=0.03),
        dict(L=0.25, q=0.0, theta0=0.02, thetaL=0.03),
        dict(L=0.25, q=0.0, theta0=0.03, thetaL=0.0),
    ],
)
def test_scenario_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        ColumnScenario(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(a=0, b=0, D=1), dict(a=1, b=0, D=-1)])
def test_soil_rejects_invalid(kwargs):
    with pytest.raises(InvalidParameterError):
        SoilHydraulics(**kwargs)


def test_negative_shifted_moisture_rejected():
    scen = ColumnScenario(L=0.25, q=0.0, theta0=0.006, thetaL=0.005)
    with pytest.raises(InvalidParameterError):
        derive_constants(SOIL, scen)


def test_data_functions():
    c = derive_constants(SOIL, EX1)
    assert w0_of_x(0.0, c) == 1.0
    assert w0_of_x(0.25, c) == pytest.approx(0.191, abs=1e-3)
    assert f_of_t(0.0, c) == 1.0
    assert f_of_t(2400.0, c) == pytest.approx(9.94, abs=0.01)
    c2 = derive_constants(SOIL, EX2)
    assert np.all(f_of_t(np.array([0.0, 60.0, 7200.0]), c2) == 1.0)


def test_theta_from_w_recoveries():
    c = derive_constants(SOIL, EX2)
    assert theta_from_w(3.0, 0.0, SOIL) == pytest.approx(-SOIL.b)
    x = np.linspace(0, EX2.L, 11)
    w = w0_of_x(x, c)
    np.testing.assert_allclose(theta_from_w(w, -c.A * w, SOIL), EX2.theta0, rtol=1e-14)
    assert theta_from_w(0.5, -c.C * 0.5, SOIL) == pytest.approx(EX2.thetaL, rel=1e-14)


@pytest.mark.parametrize("w", [0.0, -1.0, np.nan])
def test_theta_from_w_rejects_nonpositive(w):
    with pytest.raises(NonPositiveWError):
        theta_from_w(w, 1.0, SOIL)


def test_conductivity():
    assert conductivity(-SOIL.b, SOIL) == 0.0
    assert conductivity(0.03, SOIL) == pytest.approx(5.46e-8, rel=1e-3)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.5))
def test_conductivity_even_about_vertex(delta):
    lo = conductivity(-SOIL.b - delta, SOIL)
    hi = conductivity(-SOIL.b + delta, SOIL)
    assert math.isclose(lo, hi, rel_tol=1e-12, abs_tol=1e-300)
