"""Spectral solution of a third-order PDE on a wedge.

The function

    u(r, theta) = int_R Phi_tau(r) e^{theta tau} g(tau) dtau

solves

    r u_rrr + (1/r) u_r(theta theta) + 3 u_rr + (1 + c0/r) u_r + u/(2r) = 0

with ``c0 = 1`` on ``r > 0, 0 <= theta < beta`` whenever
``int |g| e^{beta |tau|} dtau < inf``, and reduces to ``(Gg)(r)`` on
``theta = 0``.  In Cartesian coordinates the equation reads

    (x d/dx + y d/dy + 2) Lap u + (c0 / rho) (x u_x + y u_y) + u / (2 rho) = 0,

``rho = sqrt(x^2 + y^2)``.  The keyword ``c0`` lets the residual be evaluated
for other values of the constant.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IntegrabilityError, QuadratureError
from .kernel import phi_direct
from .quad import DEFAULT_QUAD, DiffStencil, integrate_real_line
from .transform import _as_function, _composite, inverse_G

__all__ = ["WedgeSpec", "evaluate_u", "pde_terms_polar", "pde_residual_polar",
           "pde_residual_cartesian", "ivp_check", "GUARD"]

# distance kept from 2 pi; e^{theta tau} sech(pi tau) decays ever more slowly
GUARD = 0.05


@dataclass(frozen=True)
class WedgeSpec:
    """The wedge ``0 <= theta < beta`` with a radial range of interest."""

    beta: float
    r_min: float = 1e-3
    r_max: float = 1e4
    theta_grid: tuple = field(default=())

    def __post_init__(self):
        if not (0.0 < self.beta <= 2.0 * math.pi - GUARD):
            raise DomainError(
                f"beta = {self.beta} outside (0, 2 pi - {GUARD}]")
        if not (0.0 < self.r_min < self.r_max):
            raise DomainError("need 0 < r_min < r_max")
        grid = tuple(float(t) for t in self.theta_grid)
        if any(not (0.0 <= t < self.beta) for t in grid):
            raise DomainError("theta grid must lie in [0, beta)")
        object.__setattr__(self, "theta_grid", grid)

    def check_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if np.any(theta < 0) or np.any(theta >= self.beta):
            raise DomainError(f"theta outside [0, {self.beta})")


class _Spectral:
    """Fixed tau rule for ``int Phi_tau(r) tau^k e^{theta tau} g(tau) dtau``."""

    def __init__(self, g, wedge, quad, width=0.125):
        self.g = g
        scan = np.linspace(-60.0, 60.0, 4801)
        weight = np.abs(g(scan)) * np.exp(wedge.beta * np.abs(scan))
        peak = weight.max()
        if peak == 0:
            self.t = np.zeros(0)
            self.w = np.zeros(0)
            return
        if not np.all(np.isfinite(weight)):
            raise IntegrabilityError("g e^{beta |tau|} is not finite")
        live = np.nonzero(weight > quad.tail_cutoff * peak)[0]
        if live[0] == 0 or live[-1] == scan.size - 1:
            raise IntegrabilityError(
                "g e^{beta |tau|} has not decayed by |tau| = 60")
        lo, hi = scan[live[0]] - 0.5, scan[live[-1]] + 0.5
        self.t, self.w = _composite(lo, hi, width)
        self.gw = g(self.t) * self.w

    def __call__(self, r, theta, power=0):
        r, theta = np.broadcast_arrays(np.asarray(r, dtype=float),
                                       np.asarray(theta, dtype=float))
        if np.any(r <= 0):
            raise DomainError("r must be positive")
        out = np.zeros(r.shape)
        if self.t.size == 0:
            return out
        rf, thf = r.ravel(), theta.ravel()
        res = out.ravel()
        tw = self.gw * self.t ** power
        for i in range(0, rf.size, 64):
            ph = phi_direct(self.t[:, None], rf[None, i:i + 64])
            ex = np.exp(np.outer(self.t, thf[i:i + 64]))
            res[i:i + 64] = tw @ (ph * ex)
        return res.reshape(r.shape)


def _check_norm(g, wedge, quad):
    def weighted(t):
        a = np.abs(g(t))
        with np.errstate(divide="ignore"):
            lw = np.log(a) + wedge.beta * np.abs(t)
        return np.where(a > 0, np.exp(np.minimum(lw, 700.0)), 0.0)

    try:
        val = integrate_real_line(weighted, quad).value
    except (QuadratureError, DomainError):
        # an overflowing integrand is a divergent one
        val = math.inf
    if not math.isfinite(val):
        raise IntegrabilityError("int |g| e^{beta |tau|} dtau diverges")


def evaluate_u(g, r, theta, wedge, quad=None):
    """The solution ``u(r, theta)``.

    Parameters
    ----------
    g : SampledFunction or callable
        Function on the real line with ``int |g| e^{beta |tau|} < inf``.
    r : float or array_like
        Positive radii.
    theta : float or array_like
        Angles in ``[0, beta)``.
    wedge : WedgeSpec
    quad : QuadConfig, optional

    Returns
    -------
    float or ndarray
    """
    quad = DEFAULT_QUAD if quad is None else quad
    wedge.check_theta(theta)
    g = _as_function(g, "real_line")
    _check_norm(g, wedge, quad)
    out = _Spectral(g, wedge, quad)(r, theta)
    return out.item() if out.ndim == 0 else out


def _radial_step(order, r):
    eps = np.finfo(float).eps
    return eps ** (1.0 / (order + 4)) * min(1.0, r) * math.sqrt(max(1.0, r))


def _radial_derivative(fn, r, theta, order, stencil):
    h = stencil.h if stencil is not None and stencil.h is not None else _radial_step(order, r)
    st = DiffStencil(order=order, h=h, accuracy=4)
    pts = r + h * st.offsets
    if pts.min() <= 0:
        raise DomainError("radial stencil leaves r > 0")
    return float(st.weights @ fn(pts, np.full(pts.shape, theta))) / h ** order


def pde_terms_polar(g, r, theta, wedge, stencils=None, quad=None, c0=1.0):
    """The five terms of the polar equation at ``(r, theta)``.

    ``[r u_rrr, u_r(theta theta) / r, 3 u_rr, (1 + c0/r) u_r, u / (2r)]``;
    the mixed term differentiates the ``tau^2``-weighted integral in ``r``.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    r = float(r)
    if not r > 0:
        raise DomainError("r must be positive")
    wedge.check_theta(theta)
    g = _as_function(g, "real_line")
    _check_norm(g, wedge, quad)
    spec = _Spectral(g, wedge, quad)
    st = stencils or {}
    u = lambda rr, th: spec(rr, th)
    u_tt = lambda rr, th: spec(rr, th, power=2)
    d1 = _radial_derivative(u, r, theta, 1, st.get("r1"))
    d2 = _radial_derivative(u, r, theta, 2, st.get("r2"))
    d3 = _radial_derivative(u, r, theta, 3, st.get("r3"))
    mixed = _radial_derivative(u_tt, r, theta, 1, st.get("r1"))
    u0 = float(spec(r, theta))
    return np.array([r * d3, mixed / r, 3.0 * d2, (1.0 + c0 / r) * d1,
                     u0 / (2.0 * r)])


def pde_residual_polar(g, r, theta, wedge, stencils=None, quad=None, *,
                       c0=1.0, normalized=True):
    """Residual of the polar equation at ``(r, theta)``.

    Parameters
    ----------
    g, wedge, quad
        As in :func:`evaluate_u`.
    r, theta : float
    stencils : dict, optional
        Optional :class:`DiffStencil` per radial derivative order under keys
        ``"r1"``, ``"r2"``, ``"r3"`` (only ``h`` is used).
    c0 : float
        Constant in the ``(1 + c0/r) u_r`` coefficient.
    normalized : bool
        Divide by the largest term magnitude.

    Returns
    -------
    float
    """
    terms = pde_terms_polar(g, r, theta, wedge, stencils, quad, c0)
    res = float(np.sum(terms))
    if normalized:
        scale = float(np.max(np.abs(terms)))
        return res / scale if scale > 0 else 0.0
    return res


def pde_residual_cartesian(g, x, y, wedge, quad=None, *, c0=1.0, h=None,
                           normalized=True):
    """Residual of the Cartesian form at ``(x, y)`` by finite differences.

    The Laplacian uses fourth-order five-point second differences in each
    coordinate; the Euler operator ``x d/dx + y d/dy`` is a radial
    derivative ``rho d/drho`` taken with a fourth-order stencil.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    rho = math.hypot(x, y)
    if rho == 0:
        raise DomainError("the origin is excluded")
    g = _as_function(g, "real_line")
    _check_norm(g, wedge, quad)
    spec = _Spectral(g, wedge, quad)
    h = 2e-3 * min(1.0, rho) * math.sqrt(max(1.0, rho)) if h is None else h
    cos_t, sin_t = x / rho, y / rho
    d2 = DiffStencil(order=2, h=h)
    d1 = DiffStencil(order=1, h=h)

    def u_xy(px, py):
        rr = np.hypot(px, py)
        th = np.mod(np.arctan2(py, px), 2.0 * math.pi)
        wedge.check_theta(th)
        return spec(rr, th)

    def laplacian(cx, cy):
        # fourth-order Laplacian at (cx, cy)
        ox = cx + h * d2.offsets
        oy = cy + h * d2.offsets
        val = (d2.weights @ u_xy(ox, np.full(ox.shape, cy))
               + d2.weights @ u_xy(np.full(oy.shape, cx), oy)) / h ** 2
        return val

    # radial points along the ray through (x, y)
    offs = d1.offsets
    lap_ray = np.array([laplacian(x + k * h * cos_t, y + k * h * sin_t)
                        for k in offs])
    euler_lap = rho * float(d1.weights @ lap_ray) / h
    lap0 = laplacian(x, y)
    ray = u_xy(x + h * offs * cos_t, y + h * offs * sin_t)
    euler_u = rho * float(d1.weights @ ray) / h
    u0 = float(u_xy(np.array([x]), np.array([y]))[0])
    terms = np.array([euler_lap, 2.0 * lap0, c0 / rho * euler_u,
                      u0 / (2.0 * rho)])
    res = float(np.sum(terms))
    if normalized:
        scale = float(np.max(np.abs(terms)))
        return res / scale if scale > 0 else 0.0
    return res


def ivp_check(g, wedge, x_grid, quad=None):
    """Largest deviation between ``u(r, 0)`` and ``(Gg)(r)`` on ``x_grid``."""
    quad = DEFAULT_QUAD if quad is None else quad
    r = np.atleast_1d(np.asarray(x_grid, dtype=float))
    u0 = np.atleast_1d(evaluate_u(g, r, np.zeros(r.shape), wedge, quad))
    gg = inverse_G(g, r, quad).values
    return float(np.max(np.abs(u0 - gg))) if r.size else 0.0
