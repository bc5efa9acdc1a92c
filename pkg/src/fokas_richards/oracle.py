"""Reference solutions of the transformed heat problem.

Two solvers that share nothing with the contour representation:

* :func:`cn_solve`, Crank-Nicolson in time with second-order central
  differences, the Robin condition at x = L folded in through a ghost node;
* :func:`series_solution`, separation of variables around the particular
  solution exp(Bt) R(x), with R the steady/exponential profile meeting both
  boundary conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import integrate as sp_integrate
from scipy.optimize import brentq
from scipy.sparse.linalg import splu

from .errors import InstabilityError, InvalidParameterError
from .model import f_of_t, theta_from_w, w0_of_x
from .solver import SolutionGrid
from .spectral import IntegrandContext


@dataclass(frozen=True)
class FdConfig:
    """Crank-Nicolson grid: ``nx`` nodes on [0, L], step ``dt`` seconds.

    ``startup_steps`` implicit-Euler half steps damp the start-up oscillation
    that Crank-Nicolson shows when the initial data miss the Robin condition.
    """

    nx: int = 2001
    dt: float = 0.5
    startup_steps: int = 4

    def __post_init__(self) -> None:
        if self.nx < 101:
            raise InvalidParameterError(f"nx must be >= 101, got {self.nx}")
        if not self.dt > 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}")


def _operator(n_unknown: int, dx: float, D: float, C: float) -> sp.csc_matrix:
    """Discrete D d^2/dx^2 on nodes 1..nx-1 with the ghost node eliminated."""
    r = D / dx**2
    main = np.full(n_unknown, -2.0 * r)
    upper = np.full(n_unknown - 1, r)
    lower = np.full(n_unknown - 1, r)
    # ghost w_nx = w_{nx-2} - 2 dx C w_{nx-1}
    main[-1] = -r * (2.0 + 2.0 * dx * C)
    lower[-1] = 2.0 * r
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csc")


class _Stepper:
    """theta-scheme step for u' = K u + r g(t) e_1 with cached factorizations."""

    def __init__(self, K: sp.csc_matrix, r: float, f):
        self.K = K
        self.r = r
        self.f = f
        self.eye = sp.identity(K.shape[0], format="csc")
        self._lu = {}

    def step(self, u: np.ndarray, t: float, dt: float, theta: float) -> np.ndarray:
        key = (dt, theta)
        if key not in self._lu:
            self._lu[key] = (
                splu(self.eye - theta * dt * self.K),
                self.eye + (1.0 - theta) * dt * self.K,
            )
        lu, rhs_op = self._lu[key]
        rhs = rhs_op @ u
        rhs[0] += dt * self.r * (theta * self.f(t + dt) + (1.0 - theta) * self.f(t))
        return lu.solve(rhs)


def _wx_from_nodes(w: np.ndarray, dx: float, C: float) -> np.ndarray:
    wx = np.empty_like(w)
    wx[1:-1] = (w[2:] - w[:-2]) / (2 * dx)
    wx[0] = (-3 * w[0] + 4 * w[1] - w[2]) / (2 * dx)
    # ghost-node central difference reduces exactly to the Robin condition
    wx[-1] = -C * w[-1]
    return wx


def cn_solve(ctx: IntegrandContext, cfg: FdConfig, ts) -> SolutionGrid:
    """Crank-Nicolson solution at the FD nodes for the requested times.

    Output times need not be multiples of ``cfg.dt``; each interval between
    consecutive outputs is split into equal steps no larger than ``dt``.

    Raises
    ------
    InstabilityError
        If any w <= 0 appears.
    """
    ts = np.asarray(ts, dtype=float)
    if np.any(np.diff(ts) < 0) or np.any(ts < 0):
        raise ValueError("output times must be non-negative and ascending")
    c = ctx.constants
    D = ctx.soil.D
    xs = np.linspace(0.0, ctx.L, cfg.nx)
    dx = xs[1] - xs[0]
    K = _operator(cfg.nx - 1, dx, D, c.C)
    stepper = _Stepper(K, D / dx**2, lambda tt: float(f_of_t(tt, c)))

    u = w0_of_x(xs[1:], c)
    t = 0.0
    startup_left = cfg.startup_steps
    W = np.empty((cfg.nx, ts.size))
    for j, t_out in enumerate(ts):
        span = t_out - t
        if span > 0:
            n = max(1, math.ceil(span / cfg.dt - 1e-9))
            h = span / n
            for _ in range(n):
                if startup_left > 0:
                    u = stepper.step(u, t, h / 2, 1.0)
                    u = stepper.step(u, t + h / 2, h / 2, 1.0)
                    startup_left -= 2
                else:
                    u = stepper.step(u, t, h, 0.5)
                t += h
            if np.any(~(u > 0)):
                raise InstabilityError(f"non-positive w in Crank-Nicolson run at t={t:g} s")
            t = t_out
        W[0, j] = f_of_t(t_out, c)
        W[1:, j] = u
    WX = np.column_stack([_wx_from_nodes(W[:, j], dx, c.C) for j in range(ts.size)]) if ts.size else W
    TH = theta_from_w(W, WX, ctx.soil)
    shape = W.shape
    return SolutionGrid(
        xs, ts, W, WX, TH,
        quad_err=np.zeros(shape), failed=np.zeros(shape, dtype=bool),
        diagnostics={"solver": "crank-nicolson", "nx": cfg.nx, "dt": cfg.dt},
    )


def sample_grid(grid: SolutionGrid, xs, ctx: IntegrandContext) -> SolutionGrid:
    """Restrict an FD grid to positions ``xs``; off-node points are interpolated linearly."""
    xs = np.asarray(xs, dtype=float)
    W = np.column_stack([np.interp(xs, grid.xs, grid.w[:, j]) for j in range(grid.ts.size)])
    WX = np.column_stack([np.interp(xs, grid.xs, grid.wx[:, j]) for j in range(grid.ts.size)])
    TH = theta_from_w(W, WX, ctx.soil)
    return SolutionGrid(xs, grid.ts, W, WX, TH, np.zeros(W.shape),
                        np.zeros(W.shape, dtype=bool), dict(grid.diagnostics))


@dataclass(frozen=True)
class EigenSeries:
    """Eigenvalues mu_n of mu cos(mu L) + C sin(mu L) = 0 and series coefficients."""

    mus: np.ndarray
    coeffs: np.ndarray | None
    N: int


def _char(mu: float, L: float, C: float) -> float:
    return mu * math.cos(mu * L) + C * math.sin(mu * L)


def eigenvalues(ctx: IntegrandContext, N: int) -> EigenSeries:
    """First ``N`` positive roots of mu cos(mu L) + C sin(mu L).

    The n-th root is bracketed by ((2n-1) pi / 2L, (2n+1) pi / 2L), where the
    function takes the values +-C with opposite signs.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    L = ctx.L
    C = ctx.constants.C
    mus = np.empty(N)
    for n in range(1, N + 1):
        lo = (2 * n - 1) * math.pi / (2 * L)
        hi = (2 * n + 1) * math.pi / (2 * L)
        if C == 0:
            mus[n - 1] = lo
            continue
        mus[n - 1] = brentq(_char, lo, hi, args=(L, C), xtol=1e-12, rtol=4 * np.finfo(float).eps)
    return EigenSeries(mus, None, N)


def particular_profile(x, ctx: IntegrandContext, derivative: bool = False):
    """R(x) with R(0) = 1, R' (L) + C R(L) = 0 and R'' = gamma^2 R.

    For q > 0 this is the residue profile Delta(i gamma, x-L) / Delta(i gamma, -L);
    for q = 0 it is its gamma -> 0 limit (1 + C (L - x)) / (1 + C L).
    """
    g = ctx.constants.gamma
    C = ctx.constants.C
    L = ctx.L
    x = np.asarray(x, dtype=float)
    if g == 0:
        if derivative:
            return np.full_like(x, -C / (1 + C * L))
        return (1 + C * (L - x)) / (1 + C * L)
    u = L - x
    den = (g + C) + (g - C) * math.exp(-2 * g * L)
    if derivative:
        num = -g * ((g + C) - (g - C) * np.exp(-2 * g * u))
    else:
        num = (g + C) + (g - C) * np.exp(-2 * g * u)
    return np.exp(-g * x) * num / den


def build_series(ctx: IntegrandContext, N: int, epsabs: float = 1e-13) -> EigenSeries:
    """Eigenvalues plus coefficients c_n of w0 - R projected on sin(mu_n x).

    The projections use QUADPACK's sine-weighted rule (QAWO), which stays
    accurate for the large mu_n of a 2000-term series.
    """
    eig = eigenvalues(ctx, N)
    L = ctx.L
    c = ctx.constants

    def residual(x):
        return math.exp(-c.A * x) - float(particular_profile(x, ctx))

    coeffs = np.empty(N)
    for n, mu in enumerate(eig.mus):
        val, _ = sp_integrate.quad(residual, 0.0, L, weight="sin", wvar=mu,
                                   epsabs=epsabs, epsrel=1e-12, limit=200)
        norm = L / 2 - math.sin(2 * mu * L) / (4 * mu)
        coeffs[n] = val / norm
    return EigenSeries(eig.mus, coeffs, N)


def series_solution(ctx: IntegrandContext, series: EigenSeries, x, t, n_terms: int | None = None,
                    derivative: bool = False):
    """w (or w_x) from the first ``n_terms`` modes of ``series``.

    w(x, t) = exp(Bt) R(x) + sum_n c_n exp(-D mu_n^2 t) sin(mu_n x).
    """
    if series.coeffs is None:
        raise ValueError("series has no coefficients; use build_series")
    n = series.N if n_terms is None else n_terms
    x = np.asarray(x, dtype=float)
    mus = series.mus[:n]
    amp = series.coeffs[:n] * np.exp(-ctx.soil.D * mus**2 * t)
    growth = f_of_t(t, ctx.constants)
    if derivative:
        modes = np.cos(np.multiply.outer(x, mus)) * mus
        base = particular_profile(x, ctx, derivative=True)
    else:
        modes = np.sin(np.multiply.outer(x, mus))
        base = particular_profile(x, ctx)
    return growth * base + modes @ amp


def series_theta(ctx: IntegrandContext, series: EigenSeries, x, t, n_terms: int | None = None):
    w = series_solution(ctx, series, x, t, n_terms)
    wx = series_solution(ctx, series, x, t, n_terms, derivative=True)
    return theta_from_w(w, wx, ctx.soil)


def truncation_study(ctx: IntegrandContext, t: float, Ns, fokas, xs=None, series: EigenSeries | None = None):
    """Rows ``(N, max_x |theta_series_N - theta_fokas|)`` at time ``t``.

    ``fokas`` is a :class:`~fokas_richards.solver.FokasSolver`; ``N = 0`` keeps
    only the particular solution.
    """
    if not t > 0:
        raise ValueError("truncation study needs t > 0")
    Ns = [int(n) for n in Ns]
    if xs is None:
        xs = np.linspace(0.0, ctx.L, 101)
    if series is None or series.N < max(Ns):
        series = build_series(ctx, max(max(Ns), 1))
    theta_ref = fokas.theta(xs, t)
    rows = []
    for n in Ns:
        th = series_theta(ctx, series, xs, t, n_terms=n)
        rows.append((n, float(np.max(np.abs(th - theta_ref)))))
    return rows
