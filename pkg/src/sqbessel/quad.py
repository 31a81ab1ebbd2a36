"""Quadrature engines shared by the transform code.

Three tools live here:

* a vectorised adaptive Gauss-Kronrod rule (21 points) on finite intervals,
  used directly and through the map ``x = a + c t/(1-t)`` for half-lines;
* a vertical-line (Mellin-Barnes) contour integrator, optionally bending the
  contour to the left far from the real axis;
* central finite-difference stencils.

Integrands are called with numpy arrays and must return arrays of the same
shape (real or complex).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContourError, DomainError, QuadratureError, TruncationWarning

__all__ = [
    "QuadConfig",
    "ContourSpec",
    "DiffStencil",
    "QuadResult",
    "integrate_interval",
    "integrate_semi_infinite",
    "integrate_real_line",
    "integrate_vertical_line",
    "differentiate",
    "fd_step",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances for the adaptive rules.

    Parameters
    ----------
    abs_tol, rel_tol : float
        A result is accepted when its error estimate is below
        ``max(abs_tol, rel_tol * |value|)``.
    max_depth : int
        Maximum number of bisections of any initial panel.
    tail_cutoff : float
        Integrand magnitude (relative to the peak) below which infinite tails
        are considered negligible.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40
    tail_cutoff: float = 1e-16

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if int(self.max_depth) != self.max_depth or self.max_depth < 1:
            raise ValueError("max_depth must be an integer >= 1")
        if not self.tail_cutoff > 0:
            raise ValueError("tail_cutoff must be positive")

    def replace(self, **changes):
        fields = dict(abs_tol=self.abs_tol, rel_tol=self.rel_tol,
                      max_depth=self.max_depth, tail_cutoff=self.tail_cutoff)
        fields.update(changes)
        return QuadConfig(**fields)


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class ContourSpec:
    """A truncated vertical contour ``Re s = abscissa``.

    With ``bend > 0`` the contour leaves the vertical line once
    ``|Im s| > bend_from`` and follows ``s = a + i t - bend (|t| - bend_from)^2``.
    This is only legitimate when no singularity of the integrand lies between
    the two paths; callers that use it are responsible for that.

    Parameters
    ----------
    abscissa : float
        Real part of ``s`` on the straight part.
    height : float
        Truncation of the contour parameter ``t`` (``|t| <= height``).
    step_hint : float
        Width of the initial panels.
    bend, bend_from : float
        Curvature and starting height of the parabolic bend.
    """

    abscissa: float
    height: float = 60.0
    step_hint: float = 0.25
    bend: float = 0.0
    bend_from: float = 0.0

    def __post_init__(self):
        for name in ("abscissa", "height", "step_hint", "bend", "bend_from"):
            if not math.isfinite(getattr(self, name)):
                raise ContourError(f"{name} must be finite")
        if self.height <= 0:
            raise ContourError("height must be positive")
        if self.step_hint <= 0:
            raise ContourError("step_hint must be positive")
        if self.bend < 0 or self.bend_from < 0:
            raise ContourError("bend parameters must be non-negative")

    def path(self, t):
        """Return ``s(t)`` and ``ds/dt`` for the contour parameter ``t``."""
        t = np.asarray(t, dtype=float)
        s = self.abscissa + 1j * t
        ds = np.full(t.shape, 1j, dtype=complex)
        if self.bend > 0:
            excess = np.maximum(np.abs(t) - self.bend_from, 0.0)
            s = s - self.bend * excess ** 2
            ds = ds - 2.0 * self.bend * excess * np.sign(t)
        return s, ds


@dataclass(frozen=True)
class DiffStencil:
    """Central finite-difference stencil.

    Parameters
    ----------
    order : {1, 2, 3}
        Derivative order.
    h : float or None
        Step. ``None`` picks ``eps**(1/(order+accuracy)) * max(1, |x|)``.
    accuracy : {2, 4}
        Formal order of the truncation error.
    """

    order: int = 1
    h: float | None = None
    accuracy: int = 4

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError("order must be 1, 2 or 3")
        if self.accuracy not in (2, 4):
            raise ValueError("accuracy must be 2 or 4")
        if self.h is not None and not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError("h must be positive")

    def step(self, x):
        if self.h is not None:
            return float(self.h)
        return fd_step(self.order, self.accuracy, x)

    @property
    def offsets(self):
        return _FD_TABLE[(self.order, self.accuracy)][0]

    @property
    def weights(self):
        return _FD_TABLE[(self.order, self.accuracy)][1]


@dataclass(frozen=True)
class QuadResult:
    """Value and error estimate of an adaptive integration."""

    value: complex | float
    error: float
    n_panels: int

    def __iter__(self):
        # allows ``value, err = integrate_...(...)``
        yield self.value
        yield self.error


# 21-point Gauss-Kronrod rule with its embedded 10-point Gauss rule.
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634054, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(21)
# Gauss nodes are the odd-indexed Kronrod nodes
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG[::-1]

_MAX_PANELS = 400_000


def _eval(f, x):
    y = np.asarray(f(x))
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise DomainError("integrand returned a non-finite value")
    return y


def _gk21(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = _eval(f, x)
    kron = half * (y @ _KW)
    gauss = half * (y @ _GW)
    absk = np.abs(half) * (np.abs(y) @ _KW)
    err = np.abs(kron - gauss)
    # panels whose error is at the roundoff level cannot be improved
    stuck = err <= 50.0 * _EPS * absk
    return kron, np.where(stuck, 0.0, err), stuck


def _adaptive(f, edges, cfg, floor_abs=0.0):
    """Globally adaptive GK21 over the panels defined by ``edges``.

    Each round bisects the panels carrying the largest error estimates until
    their sum drops below ``max(abs_tol, rel_tol |I|, floor_abs)``.
    """
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    depth = np.zeros(a.shape, dtype=int)
    val, err, stuck = _gk21(f, a, b)
    n_eval = a.size
    while True:
        total = np.sum(val)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total), floor_abs)
        total_err = float(np.sum(err))
        if total_err <= tol:
            break
        order = np.argsort(-err, kind="stable")
        cum = np.cumsum(err[order])
        # smallest set of panels holding the excess error (at least half)
        need = max(total_err - 0.5 * tol, 0.5 * total_err)
        k = int(np.searchsorted(cum, need)) + 1
        pick = np.zeros(a.size, dtype=bool)
        pick[order[:k]] = True
        pick &= err > 0
        if np.any(depth[pick] >= cfg.max_depth) or n_eval > _MAX_PANELS:
            raise QuadratureError(
                f"adaptive rule failed to reach tolerance {tol:.3g} "
                f"(estimated error {total_err:.3g})")
        ap, bp = a[pick], b[pick]
        mp = 0.5 * (ap + bp)
        na = np.concatenate([ap, mp])
        nb = np.concatenate([mp, bp])
        nv, ne, ns = _gk21(f, na, nb)
        n_eval += na.size
        keep = ~pick
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        depth = np.concatenate([depth[keep], np.repeat(depth[pick] + 1, 2)])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        stuck = np.concatenate([stuck[keep], ns])
        o = np.argsort(a, kind="stable")
        a, b, depth, val, err, stuck = a[o], b[o], depth[o], val[o], err[o], stuck[o]
    return QuadResult(value=np.sum(val), error=float(np.sum(err)),
                      n_panels=n_eval)


def _as_real_if_possible(res):
    v = res.value
    if np.iscomplexobj(v) and np.imag(v) == 0:
        v = float(np.real(v))
    elif not np.iscomplexobj(v):
        v = float(v)
    else:
        v = complex(v)
    return QuadResult(value=v, error=res.error, n_panels=res.n_panels)


def integrate_interval(f, a, b, cfg=None, *, panels=1, breakpoints=()):
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    a, b : float
        Finite limits.
    cfg : QuadConfig, optional
    panels : int
        Number of equal initial panels.
    breakpoints : sequence of float
        Extra points at which to split initially (e.g. known kinks).

    Returns
    -------
    QuadResult
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate_interval needs finite limits")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.linspace(a, b, max(int(panels), 1) + 1)
    extra = [p for p in breakpoints if a < p < b]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    res = _adaptive(f, edges, cfg)
    return _as_real_if_possible(
        QuadResult(sign * res.value, res.error, res.n_panels))


def integrate_semi_infinite(f, cfg=None, *, lower=0.0, scale=1.0,
                            wavelength=None, panels=8):
    """Integral of ``f`` over ``[lower, inf)``.

    The half-line is mapped to ``[0, 1)`` by ``x = lower + scale t/(1-t)`` and
    handled by the adaptive Gauss-Kronrod rule (whose nodes never touch the
    endpoints, so integrable endpoint singularities are tolerated).

    Parameters
    ----------
    f : callable
        Vectorised integrand, finite on ``(lower, inf)``.
    cfg : QuadConfig, optional
    lower : float
        Left end point.
    scale : float
        Length scale of the map; put it near where ``f`` lives.
    wavelength : float, optional
        Oscillation wavelength of ``f``. When given, the initial panels are
        placed every half wavelength over the first 64 half waves.
    panels : int
        Number of initial panels when no wavelength is given.

    Returns
    -------
    QuadResult
        ``(value, error)``; ``error <= max(abs_tol, rel_tol |value|)``.
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError("scale must be positive")

    def mapped(t):
        one_minus = 1.0 - t
        x = lower + scale * t / one_minus
        # overflow surfaces as a non-finite value, which _eval reports
        with np.errstate(over="ignore"):
            return f(x) * (scale / one_minus ** 2)

    edges = np.linspace(0.0, 1.0, max(int(panels), 1) + 1)
    if wavelength is not None and wavelength > 0:
        xs = 0.5 * wavelength * np.arange(1, 65)
        # half waves far beyond the scale would crowd the map's end point
        xs = xs[xs <= 1e4 * scale]
        if xs.size:
            ts = xs / (xs + scale)
            edges = np.unique(np.concatenate(
                [[0.0], ts, np.linspace(ts[-1], 1.0, 9)[1:]]))
    return _as_real_if_possible(_adaptive(mapped, edges, cfg))


def integrate_real_line(f, cfg=None, *, center=0.0, scale=1.0, panels=8):
    """Integral of ``f`` over the whole real line, split at ``center``."""
    cfg = DEFAULT_QUAD if cfg is None else cfg
    right = integrate_semi_infinite(f, cfg, lower=center, scale=scale,
                                    panels=panels)
    left = integrate_semi_infinite(lambda u: f(2.0 * center - u), cfg,
                                   lower=center, scale=scale, panels=panels)
    return QuadResult(right.value + left.value, right.error + left.error,
                      right.n_panels + left.n_panels)


def integrate_vertical_line(F, x, spec, cfg=None, *, log=False):
    """Mellin-Barnes integral ``(1/2 pi i) * int F(s) x^{-s} ds``.

    Parameters
    ----------
    F : callable
        Vectorised function of complex ``s``. With ``log=True`` it must return
        ``log F(s)`` instead, which keeps large gamma products from
        overflowing.
    x : float
        Positive argument.
    spec : ContourSpec
        Contour description; see :class:`ContourSpec`.
    cfg : QuadConfig, optional

    Returns
    -------
    complex

    Warns
    -----
    TruncationWarning
        If the integrand at the truncation height exceeds ``1e-12`` times its
        peak on the contour.
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("integrate_vertical_line needs x > 0")
    logx = math.log(x)

    def integrand(t):
        s, ds = spec.path(t)
        if log:
            return np.exp(F(s) - s * logx) * ds
        return F(s) * np.exp(-s * logx) * ds

    H = float(spec.height)
    n = max(2, int(math.ceil(2 * H / spec.step_hint)))
    edges = np.linspace(-H, H, n + 1)
    res = _adaptive(integrand, edges, cfg)

    probe = np.linspace(-H, H, 4 * n + 1)
    mags = np.abs(integrand(probe))
    peak = mags.max()
    if peak > 0 and max(mags[0], mags[-1]) > 1e-12 * peak:
        warnings.warn(
            f"contour integrand at |t| = {H:g} is "
            f"{max(mags[0], mags[-1]) / peak:.2e} of its peak; the truncated "
            "integral may be inaccurate", TruncationWarning, stacklevel=2)
    return complex(res.value / (2j * math.pi))


# Central-difference offsets and weights keyed by (order, accuracy).
_FD_TABLE = {
    (1, 2): (np.array([-1, 1]), np.array([-0.5, 0.5])),
    (1, 4): (np.array([-2, -1, 1, 2]),
             np.array([1 / 12, -2 / 3, 2 / 3, -1 / 12])),
    (2, 2): (np.array([-1, 0, 1]), np.array([1.0, -2.0, 1.0])),
    (2, 4): (np.array([-2, -1, 0, 1, 2]),
             np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])),
    (3, 2): (np.array([-2, -1, 1, 2]), np.array([-0.5, 1.0, -1.0, 0.5])),
    (3, 4): (np.array([-3, -2, -1, 1, 2, 3]),
             np.array([1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8])),
}


def fd_step(order, accuracy, x):
    """Default step ``eps**(1/(order+accuracy)) * max(1, |x|)``."""
    return _EPS ** (1.0 / (order + accuracy)) * max(1.0, abs(float(x)))


def differentiate(f, x, stencil=None, *, domain=(-np.inf, np.inf)):
    """Central finite-difference derivative of ``f`` at ``x``.

    ``f`` is called once per stencil point with a float and may return a
    scalar or an array (the derivative is then taken element-wise).

    Parameters
    ----------
    f : callable
    x : float
    stencil : DiffStencil, optional
        Defaults to a first derivative with fourth-order accuracy.
    domain : (float, float)
        Open interval on which ``f`` is defined.

    Raises
    ------
    DomainError
        If a stencil point falls outside ``domain``.
    """
    stencil = DiffStencil() if stencil is None else stencil
    x = float(x)
    h = stencil.step(x)
    pts = x + h * stencil.offsets
    lo, hi = domain
    if pts.min() <= lo or pts.max() >= hi:
        raise DomainError(
            f"stencil [{pts.min():.6g}, {pts.max():.6g}] leaves the domain "
            f"({lo}, {hi})")
    vals = np.array([f(p) for p in pts])
    out = np.tensordot(stencil.weights, vals, axes=1) / h ** stencil.order
    if np.ndim(out) == 0:
        return out.item()
    return out
