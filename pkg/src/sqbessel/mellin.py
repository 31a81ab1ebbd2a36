"""Mellin transform tools and the sampled-function container.

``SampledFunction`` is the unit passed between transforms: a grid with values,
a tag describing the tail, and optionally the analytic callable (and Mellin
transform) it was sampled from.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import specfun
from .errors import DomainError, StripError
from .quad import (DEFAULT_QUAD, ContourSpec, integrate_interval,
                   integrate_real_line, integrate_semi_infinite,
                   integrate_vertical_line)

__all__ = [
    "MellinStrip",
    "SampledFunction",
    "DECAY_KINDS",
    "mellin_transform",
    "inverse_mellin",
    "parseval_check",
    "gamma_cosine_pair_check",
    "gamma_cosine_pair_tau_check",
]

DECAY_KINDS = ("exp_sqrt", "exp", "power", "sech_pi")


@dataclass(frozen=True)
class MellinStrip:
    """Abscissa and exponent pair for the spaces ``L_{nu,p}``.

    Parameters
    ----------
    nu : float
        Real part of the vertical line.
    p : float
        Exponent in ``(1, 2]``; ``q = p/(p-1)`` is derived.
    """

    nu: float
    p: float = 2.0
    q: float = field(init=False)

    def __post_init__(self):
        if not math.isfinite(self.nu):
            raise StripError("nu must be finite")
        if not (1.0 < self.p <= 2.0):
            raise StripError("p must lie in (1, 2]")
        object.__setattr__(self, "q", self.p / (self.p - 1.0))

    def check_forward(self):
        """Raise unless ``0 < nu < 3/4 - 1/(2p)`` (range used for F)."""
        upper = 0.75 - 0.5 / self.p
        if not (0.0 < self.nu < upper):
            raise StripError(
                f"nu = {self.nu} outside (0, {upper:.6g}) for p = {self.p}")
        return self


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A function on the half-line or the real line.

    Parameters
    ----------
    grid : array_like
        Strictly increasing abscissae (positive for ``half_line``).
    values : array_like
        Finite samples on ``grid``.
    decay : (str, float)
        Tail tag ``(kind, a)`` with kind in ``DECAY_KINDS``. Used to
        extrapolate beyond the grid and to declare the Mellin strip.
    domain : {"half_line", "real_line"}
    func : callable, optional
        Exact vectorised callable; when given it is used instead of
        interpolation.
    mellin : callable, optional
        Exact Mellin transform ``f*(s)``.
    origin_power : float
        ``f(x) = O(x^origin_power)`` as ``x -> 0+`` (half-line only); the
        Mellin strip starts at ``Re s > -origin_power``.
    name : str
    """

    grid: np.ndarray
    values: np.ndarray
    decay: tuple = ("exp", 1.0)
    domain: str = "half_line"
    func: Callable | None = None
    mellin: Callable | None = None
    origin_power: float = 0.0
    name: str = ""

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if grid.ndim != 1 or grid.size < 2:
            raise DomainError("grid must be one-dimensional with >= 2 points")
        if values.shape != grid.shape:
            raise DomainError("values must match the grid shape")
        if not np.all(np.isfinite(grid)) or not np.all(np.isfinite(values)):
            raise DomainError("grid and values must be finite")
        if np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be strictly increasing")
        if self.domain not in ("half_line", "real_line"):
            raise DomainError(f"unknown domain {self.domain!r}")
        if self.domain == "half_line" and grid[0] <= 0:
            raise DomainError("half-line grid must be positive")
        kind, a = self.decay
        if kind not in DECAY_KINDS:
            raise DomainError(f"unknown decay kind {kind!r}")
        if kind != "sech_pi" and not a > 0:
            raise DomainError("decay parameter must be positive")
        if not np.iscomplexobj(values):
            values = values.astype(float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "decay", (kind, float(a)))

    @classmethod
    def from_callable(cls, func, grid, decay, domain="half_line", **kw):
        """Sample ``func`` on ``grid`` and keep it for exact evaluation."""
        grid = np.asarray(grid, dtype=float)
        return cls(grid=grid, values=np.asarray(func(grid)), decay=decay,
                   domain=domain, func=func, **kw)

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    def strip(self):
        """Open interval ``(lo, hi)`` of ``Re s`` where ``f*(s)`` converges."""
        if self.domain != "half_line":
            raise StripError("Mellin strip is defined for half-line functions")
        kind, a = self.decay
        hi = a if kind == "power" else math.inf
        return (-self.origin_power, hi)

    def _tail(self, x, side):
        kind, a = self.decay
        if side > 0:
            x0, v0 = self.grid[-1], self.values[-1]
        else:
            x0, v0 = self.grid[0], self.values[0]
        ax, ax0 = np.abs(x), abs(x0)
        if kind == "exp_sqrt":
            fac = np.exp(-a * (np.sqrt(ax) - math.sqrt(ax0)))
        elif kind == "exp":
            fac = np.exp(-a * (ax - ax0))
        elif kind == "power":
            fac = (ax / ax0) ** (-a)
        else:
            fac = np.exp(-math.pi * (ax - ax0)) * (
                (1 + np.exp(-2 * math.pi * ax0)) / (1 + np.exp(-2 * math.pi * ax)))
        return v0 * fac

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(x))
        if self.domain == "half_line" and np.any(x <= 0):
            raise DomainError("half-line function evaluated at x <= 0")
        out = np.empty(x.shape, dtype=self.values.dtype)
        lo, hi = self.grid[0], self.grid[-1]
        inside = (x >= lo) & (x <= hi)
        if np.any(inside):
            out[inside] = self._interp(x[inside])
        right = x > hi
        if np.any(right):
            out[right] = self._tail(x[right], +1)
        left = x < lo
        if np.any(left):
            if self.domain == "half_line":
                out[left] = self.values[0]
            else:
                out[left] = self._tail(x[left], -1)
        return out

    def _interp(self, x):
        if self.is_complex:
            re = PchipInterpolator(self.grid, self.values.real)(x)
            im = PchipInterpolator(self.grid, self.values.imag)(x)
            return re + 1j * im
        return PchipInterpolator(self.grid, self.values)(x)

    def to_dict(self):
        """JSON-ready dictionary following the file schema."""
        kind, a = self.decay
        vals = self.values.real if self.is_complex else self.values
        return {"domain": self.domain, "grid": self.grid.tolist(),
                "values": np.asarray(vals, dtype=float).tolist(),
                "decay": {"kind": kind, "a": a}}


def _check_strip(f, s):
    if isinstance(f, SampledFunction):
        lo, hi = f.strip()
        if not (lo < s.real < hi):
            raise StripError(
                f"Re s = {s.real:g} outside the strip ({lo:g}, {hi:g})")


def mellin_transform(f, s, cfg=None):
    """Numerical Mellin transform ``f*(s) = int_0^inf f(x) x^{s-1} dx``.

    The substitution ``x = e^t`` turns the integral into two semi-infinite
    ones, split at ``x = 1``.

    Parameters
    ----------
    f : SampledFunction or callable
        Half-line function. A callable is assumed to be valid at ``s``.
    s : complex
    cfg : QuadConfig, optional

    Returns
    -------
    complex

    Raises
    ------
    StripError
        If ``Re s`` lies outside the strip declared by ``f``.
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    s = complex(s)
    _check_strip(f, s)

    def integrand(t):
        out = np.zeros(t.shape, dtype=complex)
        ok = (np.abs(t) < 700.0) & (np.abs(s.real * t) < 700.0)
        tt = t[ok]
        out[ok] = np.asarray(f(np.exp(tt))) * np.exp(s * tt)
        return out

    return complex(integrate_real_line(integrand, cfg).value)


def inverse_mellin(F, strip, x, spec=None, cfg=None):
    """Inverse Mellin transform on the line ``Re s = strip.nu``.

    Parameters
    ----------
    F : callable
        Vectorised ``f*(s)``.
    strip : MellinStrip
    x : float
    spec : ContourSpec, optional
        Contour details; abscissa is overridden by ``strip.nu``.

    Returns
    -------
    complex
    """
    if spec is None:
        spec = ContourSpec(abscissa=strip.nu)
    elif spec.abscissa != strip.nu:
        spec = ContourSpec(abscissa=strip.nu, height=spec.height,
                           step_hint=spec.step_hint, bend=spec.bend,
                           bend_from=spec.bend_from)
    return integrate_vertical_line(F, x, spec, cfg)


def _mellin_callable(f, cfg):
    if isinstance(f, SampledFunction) and f.mellin is not None:
        return f.mellin

    def F(s):
        s = np.asarray(s)
        return np.array([mellin_transform(f, v, cfg) for v in s.ravel()]
                        ).reshape(s.shape)
    return F


def parseval_check(f, g, strip, cfg=None, spec=None):
    """Residual of the Mellin-Parseval equality.

    Compares ``int_0^inf f(x) g(x) dx`` (direct quadrature) with
    ``(1/2 pi i) int f*(s) g*(1-s) ds`` on ``Re s = strip.nu``. Exact Mellin
    transforms attached to ``f`` or ``g`` are used when present, otherwise
    they are computed numerically at every contour node (slow).

    Returns
    -------
    float
        ``|LHS - RHS|``.
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    if spec is None:
        spec = ContourSpec(abscissa=strip.nu, height=40.0, step_hint=0.5)
    lhs = integrate_semi_infinite(lambda x: f(x) * g(x), cfg).value
    Fs = _mellin_callable(f, cfg)
    Gs = _mellin_callable(g, cfg)
    rhs = inverse_mellin(lambda s: Fs(s) * Gs(1.0 - s), strip, 1.0, spec, cfg)
    return float(abs(lhs - rhs))


def gamma_cosine_pair_check(s, tau, cfg=None):
    """Residual of the cosine representation of ``Gamma(s+i tau)Gamma(s-i tau)``.

    Compares the gamma product with
    ``Gamma(2s) / 2^{2s-1} * int_0^inf cos(tau y) / cosh^{2s}(y/2) dy``.

    Parameters
    ----------
    s : complex
        ``Re s > 0``.
    tau : float
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    s = complex(s)
    if s.real <= 0:
        raise DomainError("gamma_cosine_pair_check needs Re s > 0")
    lhs = specfun.gamma(s + 1j * tau) * specfun.gamma(s - 1j * tau)

    def integrand(y):
        # cosh^{-2s}(y/2) = (2 e^{-y/2} / (1 + e^{-y}))^{2s}
        logc = math.log(2.0) - 0.5 * y - np.log1p(np.exp(-y))
        return np.cos(tau * y) * np.exp(2 * s * logc)

    wl = 2 * math.pi / abs(tau) if tau else None
    integral = integrate_semi_infinite(integrand, cfg, scale=4.0,
                                       wavelength=wl).value
    rhs = specfun.gamma(2 * s) / 2 ** (2 * s - 1) * integral
    return float(abs(lhs - rhs))


def gamma_cosine_pair_tau_check(s, y, cfg=None):
    """Residual of the companion formula integrating over ``tau``.

    ``int_0^inf Gamma(s+i tau)Gamma(s-i tau) cos(tau y) d tau`` against
    ``pi Gamma(2s) / (2^{2s} cosh^{2s}(y/2))``.
    """
    cfg = DEFAULT_QUAD if cfg is None else cfg
    s = complex(s)
    if s.real <= 0:
        raise DomainError("gamma_cosine_pair_tau_check needs Re s > 0")

    def integrand(t):
        lg = specfun.loggamma(s + 1j * t) + specfun.loggamma(s - 1j * t)
        return np.exp(lg) * np.cos(t * y)

    lhs = integrate_interval(integrand, 0.0, 40.0 + abs(s), cfg, panels=32).value
    rhs = math.pi * specfun.gamma(2 * s) / (2 ** (2 * s) * np.cosh(y / 2) ** (2 * s))
    return float(abs(lhs - rhs))
