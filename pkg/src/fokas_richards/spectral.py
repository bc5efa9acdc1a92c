"""Spectral kernels, data transforms and the contour integrands of w1, w2.

The integrands never form Delta(lambda, -L) on its own. With E = exp(i lambda L)
and Im(lambda) >= 0 every ratio is rewritten as

    Delta(lambda, x - L) / Delta(lambda, -L)
        = exp(i lambda x) [(lambda + iC) + (lambda - iC) exp(2 i lambda (L - x))]
          / [(lambda + iC) + (lambda - iC) E^2]

so that only decaying exponentials appear. The rewriting is an algebraic
identity; it is merely the well-conditioned one in the upper half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KernelZeroError, PoleOnContourError
from .model import ColumnScenario, HopfColeConstants, SoilHydraulics, derive_constants

TWO_PI = 2.0 * np.pi

# |z| L below which the removable points are evaluated by Taylor series
_REMOVABLE_EPS = 1e-6


@dataclass(frozen=True)
class IntegrandContext:
    """Everything the integrands read: A, B, C, gamma, D and L."""

    constants: HopfColeConstants
    soil: SoilHydraulics
    L: float

    @classmethod
    def from_params(cls, soil: SoilHydraulics, scen: ColumnScenario) -> "IntegrandContext":
        return cls(derive_constants(soil, scen), soil, scen.L)


def delta(lam, y, C):
    """Delta(lambda, y) = lambda cos(lambda y) - C sin(lambda y)."""
    lam = np.asarray(lam, dtype=complex)
    return lam * np.cos(lam * y) - C * np.sin(lam * y)


def capF(lam, y, C):
    """F(lambda, y) = d Delta / dy = -lambda^2 sin(lambda y) - C lambda cos(lambda y)."""
    lam = np.asarray(lam, dtype=complex)
    return -(lam**2) * np.sin(lam * y) - C * lam * np.cos(lam * y)


def hat_w0(lam, ctx: IntegrandContext):
    """Fourier transform of exp(-A x) over [0, L].

    ``(1 - exp(-(A + i lambda) L)) / (A + i lambda)``, with the removable
    point lambda = iA (value L) handled by a Taylor expansion.
    """
    L = ctx.L
    z = ctx.constants.A + 1j * np.asarray(lam, dtype=complex)
    zL = z * L
    small = np.abs(zL) < _REMOVABLE_EPS
    safe = np.where(small, 1.0, z)
    out = -np.expm1(-safe * L) / safe
    series = L * (1.0 - zL / 2.0 + zL**2 / 6.0)
    return np.where(small, series, out)


def tilde_f(k, t, ctx: IntegrandContext):
    """t-transform of exp(B s): integral_0^t exp(k s) exp(B s) ds."""
    z = np.asarray(k, dtype=complex) + ctx.constants.B
    zt = z * t
    small = np.abs(zt) < _REMOVABLE_EPS
    safe = np.where(small, 1.0, z)
    out = np.expm1(safe * t) / safe
    series = t * (1.0 + zt / 2.0 + zt**2 / 6.0)
    return np.where(small, series, out)


def _prepare(lam, x):
    lam = np.asarray(lam, dtype=complex)
    x = np.asarray(x, dtype=float)
    return lam, x


def _scaled_kernel(lam, ctx: IntegrandContext):
    """(lambda + iC) + (lambda - iC) E^2, i.e. 2 exp(i lambda L) Delta(lambda, -L)."""
    C = ctx.constants.C
    E2 = np.exp(2j * lam * ctx.L)
    dt = (lam + 1j * C) + (lam - 1j * C) * E2
    if np.any(dt == 0):
        raise KernelZeroError("Delta(lambda, -L) vanished on the contour")
    return dt


def _ratio_delta(lam, x, ctx: IntegrandContext, kern):
    """Delta(lambda, x - L) / Delta(lambda, -L)."""
    C = ctx.constants.C
    u = ctx.L - x
    num = (lam + 1j * C) + (lam - 1j * C) * np.exp(2j * lam * u)
    return np.exp(1j * lam * x) * num / kern


def _ratio_F(lam, x, ctx: IntegrandContext, kern):
    """F(lambda, x - L) / Delta(lambda, -L)."""
    C = ctx.constants.C
    u = ctx.L - x
    num = (1j * lam - C) - (1j * lam + C) * np.exp(2j * lam * u)
    return lam * np.exp(1j * lam * x) * num / kern


def _pole_factor(lam, ctx: IntegrandContext):
    """2 i lambda D / (D lambda^2 + B)."""
    D = ctx.soil.D
    den = D * lam**2 + ctx.constants.B
    if np.any(den == 0):
        raise PoleOnContourError("D lambda^2 + B vanished on the contour")
    return 2j * lam * D / den


def _w1_bracket(lam, x, ctx: IntegrandContext, derivative: bool):
    A = ctx.constants.A
    C = ctx.constants.C
    L = ctx.L
    eAL = np.exp(-A * L)
    kern = _scaled_kernel(lam, ctx)
    E = np.exp(1j * lam * L)
    ex = np.exp(1j * lam * x)
    eLx = np.exp(1j * lam * (L - x))
    e2Lx = np.exp(1j * lam * (2 * L - x))

    if derivative:
        t1 = 1j * lam * (ex * (A - 1j * lam) + eAL * eLx * (A + 1j * lam)) / (A**2 + lam**2)
        # (exp(i l x) + exp(-i l x)) (E^2 - e^{-AL} E), expanded to stay bounded
        trig = ex * E**2 - eAL * ex * E + e2Lx - eAL * eLx
        t2 = (1j * lam + C) * lam * trig / ((A + 1j * lam) * kern)
        r = _ratio_F(lam, x, ctx, kern)
    else:
        t1 = (ex * (A - 1j * lam) - eAL * eLx * (A + 1j * lam)) / (A**2 + lam**2)
        trig = ex * E**2 - eAL * ex * E - e2Lx + eAL * eLx
        t2 = (1j * lam + C) * trig / (1j * (A + 1j * lam) * kern)
        r = _ratio_delta(lam, x, ctx, kern)
    t3 = r * (1.0 - eAL * E) / (A - 1j * lam)
    t4 = _pole_factor(lam, ctx) * r
    return t1 - t2 - t3 + t4


def integrand_V1(lam, x, t, ctx: IntegrandContext):
    """Full integrand of w1, including exp(-D lambda^2 t) / (2 pi).

    ``lam`` and ``x`` broadcast against each other.
    """
    lam, x = _prepare(lam, x)
    decay = np.exp(-ctx.soil.D * lam**2 * t)
    return decay * _w1_bracket(lam, x, ctx, derivative=False) / TWO_PI


def integrand_V1x(lam, x, t, ctx: IntegrandContext):
    """x-derivative of :func:`integrand_V1`."""
    lam, x = _prepare(lam, x)
    decay = np.exp(-ctx.soil.D * lam**2 * t)
    return decay * _w1_bracket(lam, x, ctx, derivative=True) / TWO_PI


def integrand_V1_pair(lam, x, t, ctx: IntegrandContext):
    """Stack of (V1, V1x) along a new leading axis, sharing the decay factor."""
    lam, x = _prepare(lam, x)
    decay = np.exp(-ctx.soil.D * lam**2 * t) / TWO_PI
    v = decay * _w1_bracket(lam, x, ctx, derivative=False)
    vx = decay * _w1_bracket(lam, x, ctx, derivative=True)
    return np.stack(np.broadcast_arrays(v, vx))


def integrand_V2(lam, x, t, ctx: IntegrandContext):
    """Integrand of w2: -(1/2pi) 2 i lambda D Delta(x-L) e^{Bt} / ((D lambda^2 + B) Delta(-L))."""
    lam, x = _prepare(lam, x)
    kern = _scaled_kernel(lam, ctx)
    growth = np.exp(ctx.constants.B * t)
    return -_pole_factor(lam, ctx) * _ratio_delta(lam, x, ctx, kern) * growth / TWO_PI


def integrand_V2x(lam, x, t, ctx: IntegrandContext):
    """x-derivative of :func:`integrand_V2` (Delta replaced by F)."""
    lam, x = _prepare(lam, x)
    kern = _scaled_kernel(lam, ctx)
    growth = np.exp(ctx.constants.B * t)
    return -_pole_factor(lam, ctx) * _ratio_F(lam, x, ctx, kern) * growth / TWO_PI
