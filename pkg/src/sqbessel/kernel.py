"""The squared-Bessel kernel ``Phi_tau(x) = sqrt(pi) sech(pi tau) Re J_{i tau}(sqrt x)^2``.

Three independent evaluations are provided (direct, Mellin-Barnes contour and
the Fourier-cosine/Struve representation), plus the residual of the
third-order ODE that the kernel satisfies.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ContourError, DomainError
from .quad import (ContourSpec, DiffStencil, QuadConfig,
                   differentiate, integrate_interval, integrate_semi_infinite,
                   integrate_vertical_line)

__all__ = [
    "KernelPoint",
    "METHODS",
    "phi",
    "phi_direct",
    "phi_mellin_barnes",
    "phi_cosine_rep",
    "ode_residual",
    "ode_terms",
    "wynn_epsilon",
    "default_contour",
]

SQRT_PI = math.sqrt(math.pi)
METHODS = ("direct", "mellin_barnes", "cosine_rep")

# w = sqrt(x) cosh(u/2) above which L1(2iw) is split into its asymptotic parts
_STRUVE_TAIL_W = 20.0


@dataclass(frozen=True)
class KernelPoint:
    """An evaluation site ``(tau, x)`` with the method to use."""

    tau: float
    x: float
    method: str = "direct"
    contour: ContourSpec | None = None

    def __post_init__(self):
        if not (self.x > 0 and math.isfinite(self.x)):
            raise DomainError("KernelPoint needs x > 0")
        if not math.isfinite(self.tau):
            raise DomainError("tau must be finite")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.method == "mellin_barnes" and self.contour is not None:
            _check_abscissa(self.contour.abscissa)

    def evaluate(self):
        return phi(self.tau, self.x, method=self.method, contour=self.contour)


def _sech(t):
    # 1/cosh without overflow
    a = np.abs(t)
    e = np.exp(-math.pi * a)
    return 2.0 * e / (1.0 + e * e)


def phi_direct(tau, x):
    """Kernel from the squared Bessel function.

    Parameters
    ----------
    tau : float or array_like
    x : float or array_like
        Positive.

    Returns
    -------
    float or ndarray
        ``sqrt(pi) / cosh(pi tau) * Re[J_{i tau}(sqrt x)^2]``.
    """
    tau_a = np.asarray(tau, dtype=float)
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a <= 0) or not np.all(np.isfinite(x_a)):
        raise DomainError("phi_direct needs x > 0")
    tau_b, x_b = np.broadcast_arrays(tau_a, x_a)
    # Re J_{i tau}^2 is even in tau; |tau| makes that exact in floating point
    j = specfun.bessel_j(1j * np.abs(tau_b.ravel()), np.sqrt(x_b.ravel()))
    out = SQRT_PI * _sech(tau_b.ravel()) * np.real(j * j)
    out = out.reshape(tau_b.shape)
    return out.item() if out.ndim == 0 else out


def _check_abscissa(a):
    if not (0.0 < a < 0.25):
        raise ContourError(f"abscissa {a} outside (0, 1/4)")


def default_contour(tau, abscissa=0.125):
    """Bent contour used for the Mellin-Barnes kernel.

    The straight part covers ``|Im s| <= |tau| + 1`` (where the poles of
    ``Gamma(s +- i tau)`` sit on the left); beyond it the path bends into the
    left half-plane where the gamma ratio decays super-exponentially.
    """
    t0 = abs(float(tau)) + 1.0
    return ContourSpec(abscissa=abscissa, height=t0 + 10.0, step_hint=0.25,
                       bend=0.5, bend_from=t0)


def _mb_log_integrand(tau):
    lg = specfun.loggamma

    def f(s):
        return (lg(s + 1j * tau) + lg(s - 1j * tau) + lg(0.5 - s)
                - lg(s) - 2.0 * lg(1.0 - s))
    return f


def phi_mellin_barnes(tau, x, spec=None, cfg=None):
    """Kernel from its Mellin-Barnes integral.

    ``(1/2 pi i) int Gamma(s+i tau) Gamma(s-i tau) Gamma(1/2-s)
    / (Gamma(s) Gamma(1-s)^2) x^{-s} ds`` on ``Re s = abscissa``.

    Parameters
    ----------
    tau : float
    x : float
    spec : ContourSpec, optional
        Defaults to :func:`default_contour`. The abscissa must lie in
        ``(0, 1/4)``.
    cfg : QuadConfig, optional

    Returns
    -------
    float
        Real part; the imaginary part is checked to be negligible.
    """
    tau = float(tau)
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("phi_mellin_barnes needs x > 0")
    spec = default_contour(tau) if spec is None else spec
    _check_abscissa(spec.abscissa)
    cfg = QuadConfig(abs_tol=1e-13, rel_tol=1e-12) if cfg is None else cfg
    val = integrate_vertical_line(_mb_log_integrand(tau), x, spec, cfg, log=True)
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ArithmeticError(
            f"contour integral not real: imaginary part {val.imag:.3g}")
    return val.real


def wynn_epsilon(partial_sums):
    """Wynn's epsilon algorithm on a sequence of partial sums.

    Returns the last entry of the highest even column, which is the usual
    accelerated limit estimate.
    """
    s = np.asarray(partial_sums, dtype=float)
    n = s.size
    if n < 3:
        return float(s[-1])
    prev = np.zeros(n + 1)
    cur = s.copy()
    best = cur[-1]
    for k in range(1, n):
        d = np.diff(cur)
        with np.errstate(divide="ignore", invalid="ignore"):
            new = prev[1:cur.size] + 1.0 / d
        if not np.all(np.isfinite(new)):
            break
        prev, cur = cur, new
        if k % 2 == 0:
            best = cur[-1]
        if cur.size < 2:
            break
    return float(best)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _struve_integral(tau, x, cfg):
    """``int_0^inf cos(tau u) sech(u/2) [L1(2i w) + 2/pi] du``, ``w = sqrt(x) cosh(u/2)``."""
    rx = math.sqrt(x)
    v1 = max(_STRUVE_TAIL_W / rx, 2.0)
    u1 = 2.0 * math.acosh(v1)

    def head(u):
        w = rx * np.cosh(0.5 * u)
        return np.cos(tau * u) / np.cosh(0.5 * u) * (
            specfun.struve_l1_imag(w) + 2.0 / math.pi)

    n_head = max(4, int(math.ceil(u1 * (1.0 + rx))))
    total = integrate_interval(head, 0.0, u1, cfg, panels=n_head).value

    # in v = cosh(u/2): du = 2 dv / sqrt(v^2 - 1)
    def jac(v):
        return 2.0 * np.cos(2.0 * tau * np.arccosh(v)) / (v * np.sqrt(v * v - 1.0))

    def smooth(v):
        return -jac(v) * (specfun._struve_h1_minus_y1(2.0 * rx * v) - 2.0 / math.pi)

    total += integrate_semi_infinite(smooth, cfg, lower=v1, scale=v1).value

    # oscillatory part -Y1(2 w): integrate half periods, then accelerate
    half = math.pi / (2.0 * rx)
    n_half = 60
    edges = v1 + half * np.arange(n_half + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + 0.5 * half * _GL_NODES[None, :]
    w = rx * nodes
    osc = specfun.struve_l1_imag(w.ravel()).reshape(w.shape) + \
        specfun._struve_h1_minus_y1(2.0 * w.ravel()).reshape(w.shape)
    pieces = 0.5 * half * ((jac(nodes) * osc) @ _GL_WEIGHTS)
    total += wynn_epsilon(np.cumsum(pieces))
    return total


def _cosine_rep_primitive(tau, x, cfg):
    # sqrt(x) int_0^inf cos(tau u) sech(u/2) L1(2i sqrt(x) cosh(u/2)) du,
    # with the plateau -2/pi integrated in closed form (int cos(tau u)
    # sech(u/2) du = pi sech(pi tau)).
    plateau = -2.0 * _sech(tau)
    return math.sqrt(x) * (plateau + _struve_integral(tau, x, cfg))


def phi_cosine_rep(tau, x, quad=None, stencil=None):
    """Kernel from its Fourier-cosine representation with the Struve function.

    ``Phi = -(1/sqrt(pi)) d/dx [sqrt(x) int_0^inf cos(tau u) sech(u/2)
    L1(2i sqrt(x) cosh(u/2)) du]``. The ``u``-integral is computed as a
    function of ``x`` and differentiated by finite differences.

    The constant plateau ``L1 -> -2/pi`` is integrated exactly; the remaining
    oscillatory tail is summed over half periods and accelerated with
    :func:`wynn_epsilon`.

    Parameters
    ----------
    tau : float
    x : float
    quad : QuadConfig, optional
    stencil : DiffStencil, optional
        First-derivative stencil (default fourth-order accuracy).
    """
    tau = float(tau)
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("phi_cosine_rep needs x > 0")
    quad = QuadConfig(abs_tol=1e-12, rel_tol=1e-12) if quad is None else quad
    stencil = DiffStencil(order=1, accuracy=4) if stencil is None else stencil
    if stencil.order != 1:
        raise ValueError("phi_cosine_rep needs a first-order stencil")
    if stencil.h is None:
        # relative step keeps the stencil inside (0, inf) for small x
        stencil = DiffStencil(order=1, accuracy=4,
                              h=1e-3 * min(1.0, x) * max(1.0, x) ** 0.5)
    d = differentiate(lambda y: _cosine_rep_primitive(tau, y, quad), x,
                      stencil, domain=(0.0, math.inf))
    return -d / SQRT_PI


def phi(tau, x, method="direct", contour=None):
    """Dispatch to one of the three kernel evaluations."""
    if method == "direct":
        return phi_direct(tau, x)
    if method == "mellin_barnes":
        return phi_mellin_barnes(tau, x, contour)
    if method == "cosine_rep":
        return phi_cosine_rep(tau, x)
    raise ValueError(f"unknown method {method!r}")


def _stencil_for(order, x, stencil):
    if stencil is not None and stencil.h is not None:
        return DiffStencil(order=order, h=stencil.h, accuracy=stencil.accuracy)
    acc = 4 if stencil is None else stencil.accuracy
    h = np.finfo(float).eps ** (1.0 / (order + acc)) * min(1.0, x) * max(1.0, x) ** 0.5
    return DiffStencil(order=order, h=h, accuracy=acc)


def ode_terms(tau, x, stencil=None, c0=1.0):
    """The four terms ``x^2 P''', 3x P'', (tau^2 + x + c0) P', P/2``."""
    tau = float(tau)
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("ode_residual needs x > 0")
    f = lambda y: phi_direct(tau, y)
    d1 = differentiate(f, x, _stencil_for(1, x, stencil), domain=(0.0, math.inf))
    d2 = differentiate(f, x, _stencil_for(2, x, stencil), domain=(0.0, math.inf))
    d3 = differentiate(f, x, _stencil_for(3, x, stencil), domain=(0.0, math.inf))
    return np.array([x * x * d3, 3.0 * x * d2, (tau * tau + x + c0) * d1,
                     0.5 * phi_direct(tau, x)])


def ode_residual(tau, x, stencil=None, c0=1.0, normalized=False):
    """Residual of ``x^2 P''' + 3x P'' + (tau^2 + x + c0) P' + P/2 = 0``.

    ``P = phi_direct(tau, .)``, derivatives by central differences.

    Parameters
    ----------
    tau, x : float
    stencil : DiffStencil, optional
        Only ``h`` and ``accuracy`` are used; the order is set per term.
    c0 : float
        Constant in the coefficient of ``P'``. The kernel satisfies the
        equation with ``c0 = 1``; other values are accepted so that
        alternative forms of the equation can be tested.
    normalized : bool
        Divide by ``max(1, |x^2 P'''|)``.
    """
    terms = ode_terms(tau, x, stencil, c0)
    r = float(terms.sum())
    if normalized:
        r /= max(1.0, abs(terms[0]))
    return r
