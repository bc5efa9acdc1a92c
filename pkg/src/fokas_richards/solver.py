"""Pointwise evaluation of w = w1 + w2, its x-derivative and theta(x, t).

w1 is a contour integral; w2 is either the residue at i*gamma in closed form
or zero when the path keeps the pole outside. Each (x, t) cell is independent,
so a grid solve is a loop over times with all positions integrated together.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .contour import (
    DEFAULT_QUAD_TOL,
    DEFAULT_TAIL_TOL,
    ContourSpec,
    choose_trapezoid,
    exclusion_contour,
    integrate,
    truncate_legs,
)
from .errors import (
    EarlyTimeError,
    FokasError,
    NonPositiveWError,
    StrategyMismatchError,
)
from .model import f_of_t, theta_from_w, w0_of_x
from .spectral import IntegrandContext, integrand_V1, integrand_V1_pair

logger = logging.getLogger(__name__)

DEFAULT_T_MIN = 1.0
IMAG_WARN_REL = 1e-6


class PoleStrategy(str, Enum):
    """How the pole of w2 at i*gamma is treated."""

    RESIDUE = "residue"
    EXCLUSION = "exclusion"
    AUTO = "auto"


@dataclass(frozen=True)
class ContourConfig:
    type: str = "trapezoid"
    ell: float = 5.0
    h: float = 1.0
    right_angle: float = math.pi / 6
    left_angle: float = 5 * math.pi / 6


@dataclass
class SolutionGrid:
    """Fields on an |xs| x |ts| lattice; NaN marks cells that failed."""

    xs: np.ndarray
    ts: np.ndarray
    w: np.ndarray
    wx: np.ndarray
    theta: np.ndarray
    quad_err: np.ndarray
    failed: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def resolve_strategy(strategy, ctx: IntegrandContext, contour_type: str = "trapezoid") -> str:
    """Map a requested strategy to ``"residue"``, ``"zero"`` or ``"exclusion"``.

    ``"zero"`` is the q = 0 case: the only pole of the w2 integrand is at the
    origin, below any trapezoid, so w2 vanishes.
    """
    strategy = PoleStrategy(strategy)
    gamma = ctx.constants.gamma
    if strategy is PoleStrategy.EXCLUSION or contour_type == "exclusion":
        if strategy is PoleStrategy.RESIDUE:
            raise StrategyMismatchError("the residue strategy needs the trapezoid contour")
        if not gamma > ctx.constants.A:
            raise StrategyMismatchError(
                f"exclusion strategy needs gamma > A (gamma={gamma:.6g}, A={ctx.constants.A:.6g})"
            )
        return "exclusion"
    if gamma == 0:
        return "zero"
    return "residue"


def build_contour(mode: str, ctx: IntegrandContext, config: ContourConfig = ContourConfig()) -> ContourSpec:
    """Untruncated path appropriate for a resolved strategy."""
    if mode == "exclusion":
        return exclusion_contour(ctx.constants)
    return choose_trapezoid(
        ctx.constants,
        ell=config.ell,
        h=config.h,
        need_gamma_inside=(mode == "residue"),
        right_angle=config.right_angle,
        left_angle=config.left_angle,
    )


def _residue_profile(x, ctx: IntegrandContext, derivative: bool = False):
    """Delta(i gamma, x - L) / Delta(i gamma, -L), or its x-derivative.

    Written with exp(-gamma x) factored out so large gamma L cannot overflow.
    """
    g = ctx.constants.gamma
    C = ctx.constants.C
    L = ctx.L
    x = np.asarray(x, dtype=float)
    u = L - x
    den = (g + C) + (g - C) * np.exp(-2 * g * L)
    if derivative:
        num = -g * ((g + C) - (g - C) * np.exp(-2 * g * u))
    else:
        num = (g + C) + (g - C) * np.exp(-2 * g * u)
    return np.exp(-g * x) * num / den


def w2_residue(x, t, ctx: IntegrandContext):
    """Residue contribution at i*gamma, in closed form.

    Equals exp(Bt) (sqrt(aq) cosh(gamma (L-x)) + a (thetaL+b) sinh(gamma (L-x)))
    / (sqrt(aq) cosh(gamma L) + a (thetaL+b) sinh(gamma L)).
    """
    if not ctx.constants.gamma > 0:
        raise StrategyMismatchError("w2_residue needs q > 0 (gamma > 0)")
    return f_of_t(t, ctx.constants) * _residue_profile(x, ctx)


def w2_residue_x(x, t, ctx: IntegrandContext):
    """x-derivative of :func:`w2_residue`."""
    if not ctx.constants.gamma > 0:
        raise StrategyMismatchError("w2_residue_x needs q > 0 (gamma > 0)")
    return f_of_t(t, ctx.constants) * _residue_profile(x, ctx, derivative=True)


def w2(x, t, strategy, ctx: IntegrandContext, contour_type: str = "trapezoid"):
    """w2 for the given strategy: the residue term, or zero.

    On its own this is not strategy-invariant: with the exclusion path the
    pole contribution moves into w1. Only w1 + w2 is.
    """
    mode = resolve_strategy(strategy, ctx, contour_type)
    if mode == "residue":
        return w2_residue(x, t, ctx)
    return np.zeros_like(np.asarray(x, dtype=float))


def w2_x(x, t, strategy, ctx: IntegrandContext, contour_type: str = "trapezoid"):
    mode = resolve_strategy(strategy, ctx, contour_type)
    if mode == "residue":
        return w2_residue_x(x, t, ctx)
    return np.zeros_like(np.asarray(x, dtype=float))


def w1(
    x,
    t: float,
    spec: ContourSpec,
    ctx: IntegrandContext,
    tol: float = DEFAULT_QUAD_TOL,
    tail_tol: float = DEFAULT_TAIL_TOL,
    t_min: float = DEFAULT_T_MIN,
):
    """Contour integral of the w1 integrand; complex, imaginary part is noise."""
    _check_time(t, t_min)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    path = truncate_legs(spec, ctx.soil.D, t, tail_tol)
    res = integrate(path, lambda z: integrand_V1(z[:, None], xs[None, :], t, ctx), tol)
    return res.value if np.ndim(x) else res.value[0]


def _check_time(t: float, t_min: float) -> None:
    if t < t_min:
        raise EarlyTimeError(
            f"t = {t:g} s is below t_min = {t_min:g} s; use the exact initial data "
            "or the finite-difference oracle"
        )


class FokasSolver:
    """Evaluates w, w_x and theta for one soil/column pair.

    Parameters
    ----------
    ctx : IntegrandContext
        Hopf-Cole constants, soil and column length.
    strategy : PoleStrategy or str
        ``"auto"`` picks the residue at i*gamma when q > 0 and zero when q = 0.
    contour : ContourConfig
        Path shape; ``type="exclusion"`` forces the exclusion strategy.
    """

    def __init__(
        self,
        ctx: IntegrandContext,
        strategy=PoleStrategy.AUTO,
        contour: ContourConfig = ContourConfig(),
        quad_tol: float = DEFAULT_QUAD_TOL,
        tail_tol: float = DEFAULT_TAIL_TOL,
        t_min: float = DEFAULT_T_MIN,
    ):
        self.ctx = ctx
        self.strategy = PoleStrategy(strategy)
        self.contour_config = contour
        self.quad_tol = quad_tol
        self.tail_tol = tail_tol
        self.t_min = t_min
        self.mode = resolve_strategy(self.strategy, ctx, contour.type)
        self.spec = build_contour(self.mode, ctx, contour)

    def _w1_pair(self, xs: np.ndarray, t: float):
        path = truncate_legs(self.spec, self.ctx.soil.D, t, self.tail_tol)
        res = integrate(
            path,
            lambda z: integrand_V1_pair(z[:, None], xs[None, :], t, self.ctx).transpose(1, 0, 2),
            self.quad_tol,
        )
        return res.value[0], res.value[1], res.abs_error_estimate

    def evaluate(self, x, t: float):
        """Return ``(w, wx, quad_err, imag_rel)`` at positions ``x`` and one time.

        At t = 0 the exact initial data is returned without quadrature.
        """
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        c = self.ctx.constants
        if t == 0:
            w = w0_of_x(xs, c)
            return w, -c.A * w, np.zeros_like(xs), np.zeros_like(xs)
        _check_time(t, self.t_min)
        v, vx, err = self._w1_pair(xs, t)
        if self.mode == "residue":
            v = v + w2_residue(xs, t, self.ctx)
            vx = vx + w2_residue_x(xs, t, self.ctx)
        imag_rel = np.maximum(np.abs(v.imag) / (1 + np.abs(v.real)),
                              np.abs(vx.imag) / (1 + np.abs(vx.real)))
        if np.any(imag_rel > IMAG_WARN_REL):
            warnings.warn(
                f"imaginary residue {imag_rel.max():.3g} at t={t:g} s exceeds "
                f"{IMAG_WARN_REL:g}; check contour and tolerances",
                stacklevel=2,
            )
        return v.real, vx.real, np.full(xs.shape, err), imag_rel

    def w_and_wx(self, x, t: float):
        w, wx, _, _ = self.evaluate(x, t)
        if np.any(~(w > 0)):
            raise NonPositiveWError(f"w <= 0 at t={t:g} s; quadrature failure or bad parameters")
        if np.ndim(x) == 0:
            return float(w[0]), float(wx[0])
        return w, wx

    def w(self, x, t: float):
        return self.w_and_wx(x, t)[0]

    def theta(self, x, t: float):
        w, wx = self.w_and_wx(x, t)
        return theta_from_w(w, wx, self.ctx.soil)

    def solve_grid(self, xs, ts, strict: bool = False) -> SolutionGrid:
        """Fill w, wx and theta on the lattice xs x ts.

        A failing time column is retried cell by cell; failing cells are left
        as NaN and listed in ``diagnostics["failures"]`` unless ``strict``.
        """
        xs = np.asarray(xs, dtype=float)
        ts = np.asarray(ts, dtype=float)
        if np.any(xs < 0) or np.any(xs > self.ctx.L):
            raise ValueError("grid positions must lie in [0, L]")
        if np.any(ts < 0):
            raise ValueError("grid times must be non-negative")
        shape = (xs.size, ts.size)
        W = np.full(shape, np.nan)
        WX = np.full(shape, np.nan)
        TH = np.full(shape, np.nan)
        ERR = np.full(shape, np.nan)
        IMAG = np.full(shape, np.nan)
        failures = []

        def fill(cols, j, t):
            w, wx, err, imag = self.evaluate(xs[cols], t)
            th = theta_from_w(w, wx, self.ctx.soil)
            W[cols, j], WX[cols, j], TH[cols, j] = w, wx, th
            ERR[cols, j], IMAG[cols, j] = err, imag

        for j, t in enumerate(ts):
            try:
                fill(slice(None), j, t)
            except FokasError as exc:
                if strict:
                    raise
                logger.warning("time column t=%g failed (%s); retrying per cell", t, exc)
                for i in range(xs.size):
                    try:
                        fill(slice(i, i + 1), j, t)
                    except FokasError as cell_exc:
                        failures.append((float(xs[i]), float(t), str(cell_exc)))

        failed = np.isnan(TH)
        diagnostics = {
            "mode": self.mode,
            "contour": self.spec.kind,
            "contour_params": dict(self.spec.params),
            "max_imag_rel": float(np.nanmax(IMAG)) if np.any(~np.isnan(IMAG)) else 0.0,
            "failures": failures,
        }
        return SolutionGrid(xs, ts, W, WX, TH, ERR, failed, diagnostics)


def w_and_wx(x, t, strategy, ctx: IntegrandContext, contour: ContourConfig = ContourConfig(), **tols):
    """Functional wrapper around :meth:`FokasSolver.w_and_wx`."""
    return FokasSolver(ctx, strategy, contour, **tols).w_and_wx(x, t)


def solve_grid(xs, ts, strategy, contour: ContourConfig, ctx: IntegrandContext, strict=False, **tols):
    """Functional wrapper around :meth:`FokasSolver.solve_grid`."""
    return FokasSolver(ctx, strategy, contour, **tols).solve_grid(xs, ts, strict=strict)
