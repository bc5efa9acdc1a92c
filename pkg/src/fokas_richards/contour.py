"""Integration paths in the upper half lambda-plane and adaptive quadrature along them.

Every path is a chain of straight pieces, so a :class:`PathSegment` is affine,
``z(s) = anchor + (s - s_anchor) * direction``. Infinite legs are cut off by
:func:`truncate_legs` once the Gaussian factor exp(-D lambda^2 t) is below a
tolerance.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EarlyTimeError, GeometryError, NonConvergenceError
from .model import HopfColeConstants

DEFAULT_TAIL_TOL = 1e-16
DEFAULT_QUAD_TOL = 1e-12
DEFAULT_MAX_PANELS = 2**14
DEFAULT_S_CAP = 1e7

# Gauss-Kronrod 7/15 pair on [-1, 1] (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GWEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes
_GWEIGHTS[[1, 3, 5]] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[[9, 11, 13]] = _WG[:3][::-1]


@dataclass(frozen=True)
class PathSegment:
    """Straight piece z(s) = anchor + (s - s_anchor) * direction on [s_lo, s_hi]."""

    anchor: complex
    direction: complex
    s_anchor: float
    s_lo: float
    s_hi: float

    def map(self, s):
        return self.anchor + (np.asarray(s, dtype=float) - self.s_anchor) * self.direction

    def derivative(self, s=None):
        if s is None:
            return self.direction
        return np.full(np.shape(s), self.direction, dtype=complex)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.s_lo) and math.isfinite(self.s_hi)

    @property
    def arc_length(self) -> float:
        return (self.s_hi - self.s_lo) * abs(self.direction)


@dataclass(frozen=True)
class ContourSpec:
    """An oriented path made of :class:`PathSegment` pieces.

    ``kind`` is ``"trapezoid"`` or ``"exclusion"``; ``params`` holds the
    construction parameters (ell, h, angles or A, gamma).
    """

    kind: str
    params: dict = field(compare=False)
    segments: tuple

    @property
    def is_finite(self) -> bool:
        return all(seg.is_finite for seg in self.segments)

    def sample(self, n: int = 64) -> np.ndarray:
        """Points along the (finite) path, ``n`` per segment."""
        if not self.is_finite:
            raise ValueError("sample() needs a truncated contour")
        return np.concatenate(
            [seg.map(np.linspace(seg.s_lo, seg.s_hi, n)) for seg in self.segments]
        )


@dataclass
class QuadratureResult:
    value: complex | np.ndarray
    abs_error_estimate: float
    panels_used: int
    converged: bool = True


def trapezoid_contour(
    ell: float,
    h: float,
    right_angle: float = math.pi / 6,
    left_angle: float = 5 * math.pi / 6,
) -> ContourSpec:
    """Infinite trapezoid: left leg into (-ell + hi), top segment, right leg out.

    With the default angles the pieces are

    * z1(s) = (-ell + hi) + (-s - ell) exp(5i pi/6),  s in (-inf, -ell]
    * z2(s) = s + hi,                                 s in [-ell, ell]
    * z3(s) = (ell + hi) + (s - ell) exp(i pi/6),     s in [ell, inf)
    """
    if not ell > 0 or not h > 0:
        raise GeometryError(f"ell and h must be positive, got ell={ell!r}, h={h!r}")
    left = complex(-ell, h)
    right = complex(ell, h)
    segs = (
        PathSegment(left, -cmath.exp(1j * left_angle), -ell, -math.inf, -ell),
        PathSegment(left, 1.0 + 0j, -ell, -ell, ell),
        PathSegment(right, cmath.exp(1j * right_angle), ell, ell, math.inf),
    )
    params = {"ell": ell, "h": h, "right_angle": right_angle, "left_angle": left_angle}
    return ContourSpec("trapezoid", params, segs)


def exclusion_contour(c: HopfColeConstants) -> ContourSpec:
    """Path that leaves i*gamma outside and keeps i*A inside.

    With P- = iA - (1 + i) and P+ = i gamma + (1 + i):

    * s in (-inf, 0]: P+ - s exp(7i pi/8), arriving from infinity at angle 7pi/8
    * s in [0, 1]:    (P- - P+) s + P+, straight down past i*gamma and i*A
    * s in [1, inf):  P- + (s - 1) exp(i pi/8), leaving at angle pi/8
    """
    if not c.gamma > c.A:
        raise GeometryError(
            f"exclusion contour needs gamma > A (gamma={c.gamma:.6g}, A={c.A:.6g})"
        )
    p_minus = 1j * c.A - (1 + 1j)
    p_plus = 1j * c.gamma + (1 + 1j)
    segs = (
        PathSegment(p_plus, -cmath.exp(7j * math.pi / 8), 0.0, -math.inf, 0.0),
        PathSegment(p_plus, p_minus - p_plus, 0.0, 0.0, 1.0),
        PathSegment(p_minus, cmath.exp(1j * math.pi / 8), 1.0, 1.0, math.inf),
    )
    params = {"A": c.A, "gamma": c.gamma, "P_minus": p_minus, "P_plus": p_plus}
    return ContourSpec("exclusion", params, segs)


def _leg_extent(anchor: complex, out_dir: complex, k: float) -> float:
    """Distance r >= 0 along anchor + r*out_dir beyond which Re(z^2) >= k."""
    qa = (out_dir * out_dir).real
    if qa <= 0:
        raise GeometryError("leg direction does not lie in the decay sector Re(d^2) > 0")
    qb = 2.0 * (anchor * out_dir).real
    qc = (anchor * anchor).real - k
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        return 0.0
    return max((-qb + math.sqrt(disc)) / (2.0 * qa), 0.0)


def truncate_legs(
    spec: ContourSpec,
    D: float,
    t: float,
    tail_tol: float = DEFAULT_TAIL_TOL,
    s_cap: float = DEFAULT_S_CAP,
) -> ContourSpec:
    """Cut the infinite legs where |exp(-D z^2 t)| <= tail_tol for good.

    Raises
    ------
    EarlyTimeError
        If ``t <= 0`` or the required cut-off exceeds ``s_cap``.
    """
    if not t > 0:
        raise EarlyTimeError("leg truncation needs t > 0 (no Gaussian decay at t = 0)")
    k = math.log(1.0 / tail_tol) / (D * t)
    new = []
    for seg in spec.segments:
        lo, hi = seg.s_lo, seg.s_hi
        if math.isinf(hi):
            r = _leg_extent(seg.map(lo).item(), seg.direction / abs(seg.direction), k)
            hi = lo + r / abs(seg.direction)
        if math.isinf(lo):
            r = _leg_extent(seg.map(hi).item(), -seg.direction / abs(seg.direction), k)
            lo = hi - r / abs(seg.direction)
        if max(abs(lo), abs(hi)) > s_cap:
            raise EarlyTimeError(
                f"leg cut-off |s| = {max(abs(lo), abs(hi)):.3g} exceeds cap {s_cap:.3g}; "
                "t is too small for contour quadrature"
            )
        new.append(replace(seg, s_lo=lo, s_hi=hi))
    params = dict(spec.params, D=D, t=t, tail_tol=tail_tol)
    return ContourSpec(spec.kind, params, tuple(new))


def _initial_panels(spec: ContourSpec, per_segment: int):
    panels = []
    for i, seg in enumerate(spec.segments):
        edges = np.linspace(seg.s_lo, seg.s_hi, per_segment + 1)
        panels.extend((i, a, b) for a, b in zip(edges[:-1], edges[1:]))
    return panels


def _eval_panels(spec: ContourSpec, f, panels):
    """Kronrod value, G/K error and roundoff scale for each panel."""
    segs = spec.segments
    seg_idx = np.array([p[0] for p in panels])
    a = np.array([p[1] for p in panels])
    b = np.array([p[2] for p in panels])
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    s_nodes = mid[:, None] + half[:, None] * _NODES[None, :]
    anchors = np.array([segs[i].anchor for i in seg_idx])
    s_anch = np.array([segs[i].s_anchor for i in seg_idx])
    dirs = np.array([segs[i].direction for i in seg_idx])
    z = anchors[:, None] + (s_nodes - s_anch[:, None]) * dirs[:, None]
    vals = np.asarray(f(z.ravel()))
    vals = vals.reshape((len(panels), 15) + vals.shape[1:])
    scale = (half * dirs).reshape((-1,) + (1,) * (vals.ndim - 2))
    kron = np.tensordot(_KWEIGHTS, vals, axes=([0], [1])) * scale
    gauss = np.tensordot(_GWEIGHTS, vals, axes=([0], [1])) * scale
    err = np.abs(kron - gauss).reshape(len(panels), -1).max(axis=1)
    mag = np.tensordot(_KWEIGHTS, np.abs(vals), axes=([0], [1])) * np.abs(scale)
    floor = 50 * np.finfo(float).eps * mag.reshape(len(panels), -1).max(axis=1)
    if not (np.all(np.isfinite(err)) and np.all(np.isfinite(kron))):
        raise NonConvergenceError("integrand produced non-finite values on the contour")
    return kron, err, floor


def integrate(
    spec: ContourSpec,
    f,
    tol: float = DEFAULT_QUAD_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
    initial_panels: int = 16,
    raise_on_failure: bool = True,
) -> QuadratureResult:
    """Integrate ``f`` along a truncated contour by adaptive G7/K15 panels.

    ``f`` receives a 1-D complex array of nodes and must return an array whose
    leading axis matches it; trailing axes are integrated componentwise and a
    panel's error is the largest Kronrod-Gauss difference over components.
    Panels are bisected worst-first until the summed error is at most ``tol``.
    Panels whose error is already at the rounding level of their own
    contribution are not split further.

    Raises
    ------
    NonConvergenceError
        If ``max_panels`` is reached with the estimate above ``tol`` and
        ``raise_on_failure`` is set. The partial result is attached.
    """
    if not spec.is_finite:
        raise ValueError("integrate() needs a truncated contour; call truncate_legs first")
    panels = _initial_panels(spec, initial_panels)
    kron, err, floor = _eval_panels(spec, f, panels)
    converged = True

    while True:
        total = float(err.sum())
        if total <= tol:
            break
        splittable = np.flatnonzero(err > floor)
        if splittable.size == 0:
            # every panel sits at its rounding floor
            break
        order = splittable[np.argsort(err[splittable])[::-1]]
        need = total - 0.5 * tol
        cum = np.cumsum(err[order])
        n_split = int(np.searchsorted(cum, need) + 1)
        n_split = min(n_split, order.size, max_panels - len(panels))
        if n_split <= 0:
            converged = False
            break
        chosen = order[:n_split]
        children = []
        for j in chosen:
            i, lo, hi = panels[j]
            m = 0.5 * (lo + hi)
            children.extend([(i, lo, m), (i, m, hi)])
        c_kron, c_err, c_floor = _eval_panels(spec, f, children)
        keep = np.ones(len(panels), dtype=bool)
        keep[chosen] = False
        panels = [p for p, k in zip(panels, keep) if k] + children
        kron = np.concatenate([kron[keep], c_kron])
        err = np.concatenate([err[keep], c_err])
        floor = np.concatenate([floor[keep], c_floor])

    order = sorted(range(len(panels)), key=lambda j: (panels[j][0], panels[j][1]))
    value = np.sum(kron[order], axis=0)
    err_est = float(err.sum())
    result = QuadratureResult(value, err_est, len(panels), converged)
    if not converged and raise_on_failure:
        raise NonConvergenceError(
            f"quadrature did not reach tol={tol:g} within {max_panels} panels "
            f"(estimate {err_est:.3g})",
            result,
        )
    return result


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = (ab * ab.conjugate()).real
    if denom == 0:
        return abs(p - a)
    s = ((p - a) * ab.conjugate()).real / denom
    s = min(max(s, 0.0), 1.0)
    return abs(p - (a + s * ab))


def min_clearance(spec: ContourSpec, points, include_real_axis: bool = False) -> float:
    """Smallest distance from the truncated path to any of ``points``.

    With ``include_real_axis`` the distance to the real axis (where the zeros
    of Delta(lambda, -L) sit) is included too.
    """
    if not spec.is_finite:
        raise ValueError("min_clearance() needs a truncated contour")
    best = math.inf
    for seg in spec.segments:
        a = seg.map(seg.s_lo).item()
        b = seg.map(seg.s_hi).item()
        for p in points:
            best = min(best, _point_segment_distance(complex(p), a, b))
        if include_real_axis:
            best = min(best, a.imag, b.imag)
    return best


def choose_trapezoid(
    c: HopfColeConstants,
    ell: float = 5.0,
    h: float = 1.0,
    need_gamma_inside: bool = False,
    min_gap: float = 0.5,
    right_angle: float = math.pi / 6,
    left_angle: float = 5 * math.pi / 6,
) -> ContourSpec:
    """Trapezoid whose top stays at least ``min_gap`` below i*A (and i*gamma).

    i*A must lie above the path for the w1 representation to hold; i*gamma must
    as well when the residue strategy evaluates w2. ``h`` is halved, with a
    warning, until both gaps hold.
    """
    ceiling = c.A
    if need_gamma_inside:
        ceiling = min(ceiling, c.gamma)
    if ceiling <= min_gap:
        raise GeometryError(
            f"no trapezoid height leaves clearance {min_gap} below {ceiling:.6g}"
        )
    h0 = h
    while ceiling - h < min_gap:
        h /= 2.0
    if h != h0:
        warnings.warn(
            f"trapezoid height reduced from {h0:g} to {h:g} to keep clearance "
            f"{min_gap} from the poles on the imaginary axis",
            stacklevel=2,
        )
    return trapezoid_contour(ell, h, right_angle, left_angle)
