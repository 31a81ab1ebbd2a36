"""The index transforms ``F`` and ``G`` with squared-Bessel kernels, and their inverses.

``(Ff)(tau) = int_0^inf f(x) Phi_tau(x) dx`` and
``(Gg)(x) = int_R Phi_tau(x) g(tau) dtau`` with
``Phi_tau(x) = sqrt(pi) sech(pi tau) Re J_{i tau}(sqrt x)^2``.

Both inversion formulas involve the bracket

    B(x, tau) = Im[J_{i tau}(sqrt x)^2] / sinh(pi tau) - P(tau, x) / pi,

where ``P`` is the order-derivative pair of :func:`eps_deriv_pair`.  ``B`` is
even in ``tau``, vanishes at ``tau = 0`` and equals
``2 sinh^2(pi tau) / pi^3 * int_0^inf K_{i tau}(sqrt y)^2 / (x + y) dy``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from . import specfun
from .errors import (DomainError, IntegrabilityError, NormError,
                     QuadratureError, StripError)
from .kernel import SQRT_PI, _sech, phi_direct, wynn_epsilon
from .mellin import MellinStrip, SampledFunction
from .quad import (DEFAULT_QUAD, ContourSpec, DiffStencil, differentiate,
                   integrate_interval, integrate_real_line,
                   integrate_semi_infinite, integrate_vertical_line)

__all__ = [
    "ForwardResult",
    "InverseResult",
    "EpsDerivPair",
    "weighted_norm",
    "l1_norm",
    "forward_F",
    "forward_F_via_phi",
    "G_operator",
    "inverse_G",
    "identity_3_2_sides",
    "identity_3_2_check",
    "eps_deriv_pair",
    "eps_deriv_pair_value",
    "bracket",
    "resolvent_K2",
    "kernel_K_2_17",
    "theta_3_13",
    "invert_F_2_13",
    "invert_G_3_5",
    "FInverter",
    "GInverter",
]

_GL16 = np.polynomial.legendre.leggauss(16)
_GL24 = np.polynomial.legendre.leggauss(24)


def _composite(a, b, width, rule=_GL16):
    """Nodes and weights of a composite Gauss rule on ``[a, b]``."""
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x, w = rule
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _tau_over_sinh(t):
    # tau / sinh(pi tau), 1/pi at the origin
    t = np.abs(np.asarray(t, dtype=float))
    small = t < 1e-8
    ts = np.where(small, 1.0, t)
    e = np.exp(-2.0 * math.pi * ts)
    out = 2.0 * ts * np.exp(-math.pi * ts) / (1.0 - e)
    return np.where(small, 1.0 / math.pi, out)


def _x_coth(t):
    # x coth(pi x), 1/pi at the origin
    t = np.abs(np.asarray(t, dtype=float))
    small = t < 1e-8
    ts = np.where(small, 1.0, t)
    return np.where(small, 1.0 / math.pi, ts / np.tanh(math.pi * ts))


def _as_function(f, domain):
    """Wrap plain callables; SampledFunction passes through."""
    if isinstance(f, SampledFunction):
        return f
    if isinstance(f, (ForwardResult, InverseResult)):
        return f.to_sampled()
    if callable(f):
        grid = (np.geomspace(1e-3, 100.0, 64) if domain == "half_line"
                else np.linspace(-10.0, 10.0, 81))
        return SampledFunction.from_callable(f, grid, ("exp", 1.0),
                                             domain=domain)
    raise TypeError("expected a SampledFunction or a callable")


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True, eq=False)
class ForwardResult:
    """Samples of ``Ff`` on a tau grid.

    ``weighted_norm`` is ``int |f| e^{2 sqrt x} dx`` (``inf`` when it
    diverges).  When it is finite the bound ``|Ff| <= sqrt(pi) * norm`` is
    checked at construction.
    """

    tau_grid: np.ndarray
    values: np.ndarray
    weighted_norm: float
    method: str = "direct"

    def __post_init__(self):
        tau = np.atleast_1d(np.asarray(self.tau_grid, dtype=float))
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if tau.shape != vals.shape:
            raise DomainError("tau_grid and values differ in shape")
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "values", vals)
        bound = SQRT_PI * self.weighted_norm
        if math.isfinite(bound) and vals.size and np.max(np.abs(vals)) > bound * (1 + 1e-9) + 1e-300:
            raise NormError(
                f"sup |Ff| = {np.max(np.abs(vals)):.6g} exceeds "
                f"sqrt(pi) * norm = {bound:.6g}")

    def to_sampled(self):
        """Tau-side :class:`SampledFunction` (even extension when the grid starts at 0)."""
        return SampledFunction(self.tau_grid, self.values, ("sech_pi", 1.0),
                               domain="real_line")


@dataclass(frozen=True, eq=False)
class InverseResult:
    """Samples of ``Gg`` on an x grid; checks ``|Gg| <= sqrt(pi) ||g||_1``."""

    x_grid: np.ndarray
    values: np.ndarray
    l1_norm_g: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x_grid, dtype=float))
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if x.shape != vals.shape:
            raise DomainError("x_grid and values differ in shape")
        if np.any(x <= 0):
            raise DomainError("x_grid must be positive")
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "values", vals)
        bound = SQRT_PI * self.l1_norm_g
        if math.isfinite(bound) and vals.size and np.max(np.abs(vals)) > bound * (1 + 1e-9) + 1e-300:
            raise NormError(
                f"sup |Gg| = {np.max(np.abs(vals)):.6g} exceeds "
                f"sqrt(pi) * ||g||_1 = {bound:.6g}")

    def to_sampled(self):
        return SampledFunction(self.x_grid, self.values, ("power", 0.5))


@dataclass(frozen=True)
class EpsDerivPair:
    """``J_{i tau} dJ_{e - i tau}/de + J_{-i tau} dJ_{e + i tau}/de`` at ``e = 0``."""

    tau: float
    x: float
    value: float
    imag_residual: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError("order-derivative pair is not finite")
        if abs(self.imag_residual) > 1e-12 * max(1.0, abs(self.value)):
            raise DomainError(
                f"pair not real: imaginary part {self.imag_residual:.3g}")


# ---------------------------------------------------------------------------
# norms


def weighted_norm(f, quad=None):
    """``int_0^inf |f(x)| e^{2 sqrt x} dx``, or ``inf`` when it diverges.

    A decay tag slower than ``exp(-2 sqrt x)`` is taken as divergence;
    otherwise the integral is computed and the tail ``x w(x)`` inspected at
    large ``x``.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    f = _as_function(f, "half_line")
    kind, a = f.decay
    if kind == "power" or (kind == "exp_sqrt" and a <= 2.0):
        return math.inf

    def w(x):
        x = np.asarray(x, dtype=float)
        a = np.abs(f(x))
        with np.errstate(divide="ignore"):
            lw = np.log(a) + 2.0 * np.sqrt(x)
        return np.where(a > 0, np.exp(np.minimum(lw, 700.0)), 0.0)

    try:
        res = integrate_semi_infinite(w, quad, scale=1.0)
    except (QuadratureError, DomainError):
        return math.inf
    val = float(res.value)
    far = np.array([1e4, 1e5, 1e6])
    if not math.isfinite(val) or np.any(far * w(far) > 1e-8 * max(val, 1e-300)):
        return math.inf
    return val


def l1_norm(g, quad=None):
    """``int_R |g(tau)| dtau`` (``inf`` when the quadrature fails)."""
    quad = DEFAULT_QUAD if quad is None else quad
    g = _as_function(g, "real_line")
    try:
        val = integrate_real_line(lambda t: np.abs(g(t)), quad).value
    except (QuadratureError, DomainError):
        return math.inf
    return float(val) if math.isfinite(val) else math.inf


# ---------------------------------------------------------------------------
# forward transform


def _kernel_mellin(tau):
    """Mellin transform of ``Phi_tau``."""
    g = specfun.gamma

    def F(s):
        return (g(s + 1j * tau) * g(s - 1j * tau) * g(0.5 - s)
                * specfun.rgamma(s) * specfun.rgamma(1.0 - s) ** 2)
    return F


def _forward_direct(f, tau, quad, l1f):
    # Re J^2 carries e^{pi tau} cancellation, so absolute accuracy bottoms
    # out near 1e-15 ||f||_1
    cfg = quad.replace(abs_tol=max(quad.abs_tol * float(_sech(tau)),
                                   1e-14 * l1f))
    res = integrate_semi_infinite(lambda x: f(x) * phi_direct(tau, x), cfg,
                                  scale=1.0, panels=16)
    return float(res.value)


def _forward_mellin(f, tau, quad, l1f, abscissa=0.125):
    # Parseval: Ff(tau) = (1/2 pi i) int Phi*_tau(s) f*(1 - s) ds
    Fk = _kernel_mellin(tau)
    spec = ContourSpec(abscissa=abscissa, height=abs(tau) + 40.0,
                       step_hint=0.25)
    cfg = quad.replace(abs_tol=quad.abs_tol * float(_sech(tau)))
    val = integrate_vertical_line(lambda s: Fk(s) * f.mellin(1.0 - s), 1.0,
                                  spec, cfg)
    return val.real


def forward_F(f, tau_grid, quad=None, *, method="auto", enforce_norm=True):
    """Forward index transform ``(Ff)(tau)`` on a grid.

    Parameters
    ----------
    f : SampledFunction or callable
        Function on the positive half-line.
    tau_grid : array_like
    quad : QuadConfig, optional
    method : {"auto", "direct", "mellin"}
        ``"direct"`` integrates ``f`` against the kernel on the half-line.
        ``"mellin"`` uses Parseval's formula with the closed-form Mellin
        transform of the kernel and ``f.mellin``; it keeps full relative
        accuracy at large ``tau`` where the direct integral loses about
        ``e^{pi tau} * 1e-16`` to cancellation.  ``"auto"`` picks ``"mellin"``
        when ``f.mellin`` is known.
    enforce_norm : bool
        Raise :class:`NormError` when ``int |f| e^{2 sqrt x} dx`` diverges.
        With ``False`` the transform is still computed (it only needs
        absolute convergence) and ``weighted_norm`` is reported as ``inf``.

    Returns
    -------
    ForwardResult
    """
    quad = DEFAULT_QUAD if quad is None else quad
    f = _as_function(f, "half_line")
    norm = weighted_norm(f, quad)
    if enforce_norm and not math.isfinite(norm):
        raise NormError(
            "int |f| e^{2 sqrt x} dx diverges; pass enforce_norm=False to "
            "compute the transform anyway")
    if method == "auto":
        method = "mellin" if f.mellin is not None else "direct"
    if method == "mellin" and f.mellin is None:
        raise ValueError("method 'mellin' needs f.mellin")
    if method not in ("direct", "mellin"):
        raise ValueError(f"unknown method {method!r}")
    taus = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if not np.all(np.isfinite(taus)):
        raise DomainError("tau grid must be finite")
    point = _forward_mellin if method == "mellin" else _forward_direct
    l1f = 0.0
    if method == "direct":
        l1f = float(integrate_semi_infinite(lambda x: np.abs(f(x)), quad).value)
    vals = np.array([point(f, t, quad, l1f) for t in taus])
    return ForwardResult(taus, vals, norm, method)


def _inverse_mellin_fixed(F, abscissa, x, height, width=0.25, chunk=256):
    """``(1/2 pi i) int F(s) x^{-s} ds`` on ``Re s = abscissa`` for many ``x``.

    The contour samples ``F`` once on a composite Gauss rule; ``F`` must decay
    exponentially so that ``height`` truncation is harmless.
    """
    t, w = _composite(-height, height, width)
    s = abscissa + 1j * t
    Fw = F(s) * w / (2.0 * math.pi)
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    flat = x.ravel()
    res = out.ravel()
    for i in range(0, flat.size, chunk):
        lx = np.log(flat[i:i + chunk])
        res[i:i + chunk] = np.real(np.exp(-np.outer(lx, s)) @ Fw)
    return res.reshape(x.shape)


def forward_F_via_phi(f, tau_grid, strip=None, quad=None, *, height=40.0):
    """Forward transform through the modified-Bessel representation.

    ``(Ff)(tau) = sqrt(pi) sech(pi tau) int_0^inf Re[I_{i tau}(x/2)]
    e^{-x/2} phi(x) dx`` where ``phi`` is the inverse Mellin transform of
    ``f*(s) / Gamma(s)`` on ``Re s = 1 - nu``.

    Parameters
    ----------
    f : SampledFunction
        Must carry ``mellin``.
    tau_grid : array_like
    strip : MellinStrip, optional
        Defaults to ``nu = 1/4, p = 2``; validated by ``check_forward``.
    quad : QuadConfig, optional
    height : float
        Truncation of the contour for ``phi``.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    strip = MellinStrip(0.25) if strip is None else strip
    strip.check_forward()
    if not isinstance(f, SampledFunction) or f.mellin is None:
        raise ValueError("forward_F_via_phi needs f with a known Mellin transform")
    c = 1.0 - strip.nu

    def phi_fn(x):
        return _inverse_mellin_fixed(
            lambda s: f.mellin(s) * specfun.rgamma(s), c, x, height)

    # integrate phi up to where it sinks into its noise floor
    probe = np.geomspace(1e-2, 1e4, 121)
    mag = np.abs(phi_fn(probe))
    peak = mag.max()
    below = mag < 1e-15 * peak
    upper = probe[-1]
    after = np.nonzero(~below)[0]
    if after.size and after[-1] + 1 < probe.size:
        upper = probe[after[-1] + 1]
    taus = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    vals = []
    for tau in taus:
        cfg = quad.replace(abs_tol=quad.abs_tol * float(_sech(tau)))

        def integrand(x, tau=tau):
            i_s = specfun.bessel_i_scaled(1j * tau, 0.5 * x)
            return np.real(i_s) * phi_fn(x)

        res = integrate_interval(integrand, 0.0, upper, cfg, panels=16,
                                 breakpoints=(1.0, 10.0))
        vals.append(SQRT_PI * float(_sech(tau)) * float(res.value))
    return ForwardResult(taus, np.array(vals), weighted_norm(f, quad), "via_phi")


# ---------------------------------------------------------------------------
# the transform G


def _tau_rule(g, width, cutoff):
    """Nodes, weights and even part of ``g`` on ``[0, T]``.

    ``T`` is where ``|g(tau) + g(-tau)|`` falls below ``cutoff`` times its
    peak; the kernel is bounded by one, so this bounds the neglected tail.
    """
    scan = np.linspace(0.0, 60.0, 2401)
    ge = np.abs(g(scan) + g(-scan))
    peak = ge.max()
    if peak == 0:
        return np.zeros(0), np.zeros(0), np.zeros(0)
    live = np.nonzero(ge > cutoff * peak)[0]
    T = min(scan[live[-1]] + 0.5, 60.0)
    t, w = _composite(0.0, T, width)
    return t, w, g(t) + g(-t)


def G_operator(g, quad=None, *, width=0.125):
    """Vectorised ``x -> (Gg)(x)`` using a fixed Gauss rule in ``tau``.

    The kernel is even in ``tau``, so only the even part of ``g`` enters.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    g = _as_function(g, "real_line")
    t, w, ge = _tau_rule(g, width, quad.tail_cutoff)
    gw = ge * w

    def Gg(x, chunk=128):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("(Gg)(x) needs x > 0")
        flat = x.ravel()
        out = np.zeros(flat.shape)
        if t.size:
            for i in range(0, flat.size, chunk):
                out[i:i + chunk] = gw @ phi_direct(t[:, None], flat[None, i:i + chunk])
        return out.reshape(x.shape)
    return Gg


def _resolved_G(g, quad, probe):
    """``G_operator`` at the coarsest tau width that is converged on ``probe``."""
    width = 0.25
    prev = G_operator(g, quad, width=width)
    pv = prev(probe)
    for _ in range(5):
        width *= 0.5
        cur = G_operator(g, quad, width=width)
        cv = cur(probe)
        if np.all(np.abs(cv - pv) <= np.maximum(quad.abs_tol, quad.rel_tol * np.abs(cv))):
            return prev
        prev, pv = cur, cv
    raise QuadratureError("tau rule for (Gg)(x) did not converge")


def inverse_G(g, x_grid, quad=None, *, enforce_norm=True):
    """The transform ``(Gg)(x) = int_R Phi_tau(x) g(tau) dtau`` on a grid.

    Parameters
    ----------
    g : SampledFunction or callable
        Function on the real line.
    x_grid : array_like
        Positive abscissae.
    quad : QuadConfig, optional
    enforce_norm : bool
        Raise :class:`NormError` if ``||g||_1`` is not finite.

    Returns
    -------
    InverseResult
    """
    quad = DEFAULT_QUAD if quad is None else quad
    g = _as_function(g, "real_line")
    norm = l1_norm(g, quad)
    if enforce_norm and not math.isfinite(norm):
        raise NormError("g is not integrable on the real line")
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    Gg = _resolved_G(g, quad, x)
    return InverseResult(x, Gg(x), norm)


def identity_3_2_sides(g, strip, y, quad=None):
    """Both sides of the Mellin-Barnes identity for ``Gg``.

    Left: ``(1/2 pi i) int Gamma(s) Gamma(1-s)^2 (Gg)*(s) y^{-s} ds`` on
    ``Re s = nu``, with ``Gamma(s) Gamma(1-s)^2 (Gg)*(s)`` written as
    ``Gamma(1/2 - s) int g(tau) Gamma(s + i tau) Gamma(s - i tau) dtau``.
    Right: ``sqrt(pi) int e^{y/2} K_{i tau}(y/2) g(tau) sech(pi tau) dtau``.

    Returns
    -------
    (float, float)
    """
    quad = DEFAULT_QUAD if quad is None else quad
    if not (0.0 < strip.nu < 0.5):
        raise StripError(f"nu = {strip.nu} outside (0, 1/2)")
    if not (y > 0 and math.isfinite(y)):
        raise DomainError("y must be positive")
    g = _as_function(g, "real_line")
    t, w, ge = _tau_rule(g, 0.125, quad.tail_cutoff)
    if t.size == 0:
        return 0.0, 0.0
    # the gamma product is even in tau
    wts = w * ge

    def lhs_integrand(s):
        s = np.asarray(s)
        flat = s.ravel()
        gp = specfun.gamma(flat[None, :] + 1j * t[:, None])
        gm = specfun.gamma(flat[None, :] - 1j * t[:, None])
        return (specfun.gamma(0.5 - flat) * (wts @ (gp * gm))).reshape(s.shape)

    spec = ContourSpec(abscissa=strip.nu, height=float(t[-1]) + 25.0,
                       step_hint=1.0)
    lhs = integrate_vertical_line(lhs_integrand, y, spec, quad)
    # K_{i tau} is even in tau as well
    rhs = integrate_semi_infinite(
        lambda tau: (specfun.macdonald_k_scaled(tau, 0.5 * y)
                     * (g(tau) + g(-tau)) * _sech(tau)),
        quad, scale=2.0)
    return float(lhs.real), SQRT_PI * float(rhs.value)


def identity_3_2_check(g, strip, y, quad=None):
    """Absolute residual between the two sides of :func:`identity_3_2_sides`."""
    lhs, rhs = identity_3_2_sides(g, strip, y, quad)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# order derivatives and the inversion brackets


def eps_deriv_pair_value(tau, x):
    """Vectorised ``2 Re[J_{i tau}(sqrt x) dJ_nu/dnu(sqrt x)|_{nu = -i tau}]``."""
    tau_a, x_a = np.broadcast_arrays(np.asarray(tau, dtype=float),
                                     np.asarray(x, dtype=float))
    if np.any(x_a <= 0):
        raise DomainError("eps_deriv_pair needs x > 0")
    j, dj = specfun.bessel_j_and_dnu(-1j * tau_a, np.sqrt(x_a))
    # J_{i tau} is the conjugate of J_{-i tau} for real tau and x
    out = 2.0 * np.real(np.conj(j) * dj)
    return out.item() if out.ndim == 0 else out


def eps_deriv_pair(tau, x):
    """The order-derivative pair at one point.

    Parameters
    ----------
    tau : float
    x : float
        Positive.

    Returns
    -------
    EpsDerivPair
        ``value`` is real; the two summands are computed separately and the
        imaginary part of their sum is kept as a consistency check.
    """
    if not (x > 0):
        raise DomainError("eps_deriv_pair needs x > 0")
    z = math.sqrt(x)
    jm, djm = specfun.bessel_j_and_dnu(-1j * tau, z)
    jp, djp = specfun.bessel_j_and_dnu(1j * tau, z)
    total = complex(jp * djm + jm * djp)
    return EpsDerivPair(float(tau), float(x), total.real, total.imag)


def bracket(x, tau):
    """``Im[J_{i tau}(sqrt x)^2] / sinh(pi tau) - P(tau, x) / pi`` (vectorised).

    Even in ``tau`` and zero at ``tau = 0``.
    """
    tau_a, x_a = np.broadcast_arrays(np.abs(np.asarray(tau, dtype=float)),
                                     np.asarray(x, dtype=float))
    if np.any(x_a <= 0):
        raise DomainError("bracket needs x > 0")
    j, dj = specfun.bessel_j_and_dnu(-1j * tau_a, np.sqrt(x_a))
    jp = np.conj(j)
    pair = 2.0 * np.real(jp * dj)
    small = tau_a < 1e-8
    ts = np.where(small, 1.0, tau_a)
    ratio = np.imag(jp * jp) / np.sinh(math.pi * ts)
    # Im J^2 / sinh -> P / pi as tau -> 0
    out = np.where(small, 0.0, ratio - pair / math.pi)
    return out.item() if out.ndim == 0 else out


def resolvent_K2(x, tau, quad=None):
    """``int_0^inf K_{i tau}(sqrt y)^2 / (x + y) dy`` by quadrature in ``log y``."""
    quad = DEFAULT_QUAD if quad is None else quad
    return _k2_integral(x, tau, quad, power=1)


def _k2_integral(x, tau, quad, power):
    if not (x > 0):
        raise DomainError("x must be positive")

    def integrand(u):
        y = np.exp(u)
        z = np.sqrt(y)
        k = specfun.macdonald_k_scaled(tau, z) * np.exp(-z)
        return y * k * k / (x + y) ** power

    res = integrate_interval(integrand, -60.0, 2.0 * math.log(60.0), quad,
                             panels=40)
    return float(res.value)


def kernel_K_2_17(x, tau, quad=None, *, method="quadrature", stencil=None):
    """The kernel ``K(x, tau) = -int_0^inf K_{i tau}(sqrt y)^2 / (x + y)^2 dy``.

    Parameters
    ----------
    x : float
        Positive.
    tau : float
    quad : QuadConfig, optional
    method : {"quadrature", "closed_form"}
        ``"closed_form"`` differentiates
        ``pi^3 / (2 sinh^2 pi tau) * bracket(x, tau)`` in ``x`` by central
        differences; it needs ``tau != 0``.
    stencil : DiffStencil, optional

    Returns
    -------
    float
        Always negative.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    if not (x > 0):
        raise DomainError("x must be positive")
    if method == "quadrature":
        return -_k2_integral(x, tau, quad, power=2)
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    if tau == 0:
        raise DomainError("closed form of K(x, tau) is singular at tau = 0")
    stencil = DiffStencil(h=1e-3 * x) if stencil is None else stencil
    c = math.pi ** 3 / (2.0 * math.sinh(math.pi * tau) ** 2)
    return c * differentiate(lambda p: bracket(p, tau), x, stencil,
                             domain=(0.0, math.inf))


def theta_3_13(x, y, quad=None, *, route="integral"):
    """The kernel ``Theta(x, y)`` of the inversion of ``G``.

    ``route="integral"`` evaluates
    ``sqrt(pi)/(x sinh pi x) - (2/sqrt(pi)) int_0^inf K_{ix}(sqrt(y t))^2 /
    (1 + t)^2 dt``; ``route="kernel"`` evaluates
    ``sqrt(pi)/(x sinh pi x) + (2/sqrt(pi)) y K(y, x)`` with the closed form
    of ``K``.
    """
    quad = DEFAULT_QUAD if quad is None else quad
    if x == 0:
        raise DomainError("Theta(x, y) is singular at x = 0")
    if not (y > 0):
        raise DomainError("y must be positive")
    head = SQRT_PI / (x * math.sinh(math.pi * x))
    if route == "kernel":
        return head + 2.0 / SQRT_PI * y * kernel_K_2_17(y, x, quad,
                                                        method="closed_form")
    if route != "integral":
        raise ValueError(f"unknown route {route!r}")

    def integrand(u):
        t = np.exp(u)
        z = np.sqrt(y * t)
        k = specfun.macdonald_k_scaled(x, z) * np.exp(-z)
        return t * k * k / (1.0 + t) ** 2

    hi = 2.0 * math.log(60.0) - math.log(y)
    res = integrate_interval(integrand, hi - 70.0, hi, quad, panels=40)
    return head - 2.0 / SQRT_PI * float(res.value)


# ---------------------------------------------------------------------------
# inversion of F


def _tau_side(Ff, tau_max):
    """Return ``(C, tau_max)`` with ``C(tau) = Ff(tau) cosh(pi tau)``."""
    if isinstance(Ff, ForwardResult):
        grid, vals = Ff.tau_grid, Ff.values
    elif isinstance(Ff, SampledFunction) and Ff.func is None:
        grid, vals = Ff.grid, Ff.values
    else:
        fn = Ff.func if isinstance(Ff, SampledFunction) else Ff
        top = 12.0 if tau_max is None else float(tau_max)
        return (lambda t: np.asarray(fn(t)) * np.cosh(math.pi * np.asarray(t))), top
    keep = grid >= 0
    grid, vals = grid[keep], vals[keep]
    if grid.size < 4 or grid[0] != 0.0:
        raise DomainError("sampled Ff needs a tau grid starting at 0 with >= 4 points")
    spline = CubicSpline(grid, vals * np.cosh(math.pi * grid),
                         bc_type=((1, 0.0), "not-a-knot"))
    top = grid[-1] if tau_max is None else min(float(tau_max), grid[-1])
    return spline, top


def _output_grid(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size < 2 or np.any(np.diff(x) <= 0):
        raise DomainError("output grid must be strictly increasing with >= 2 points")
    return x


def _zero_crossings(t, y):
    s = np.sign(y)
    idx = np.nonzero(s[1:] * s[:-1] < 0)[0]
    return t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])


def _segment_nodes(edges, max_width=0.5):
    nodes, weights, owner = [], [], []
    x, w = _GL24
    for k in range(edges.size - 1):
        a, b = edges[k], edges[k + 1]
        n = max(1, int(math.ceil((b - a) / max_width)))
        sub = np.linspace(a, b, n + 1)
        half = 0.5 * np.diff(sub)
        mid = 0.5 * (sub[1:] + sub[:-1])
        nodes.append((mid[:, None] + half[:, None] * x).ravel())
        weights.append((half[:, None] * w).ravel())
        owner.append(np.full(n * x.size, k))
    return np.concatenate(nodes), np.concatenate(weights), np.concatenate(owner)


def _invert_F_point(C, tau_max, x, stencil, cutoff, summation):
    h = min(stencil.step(x), 0.25 * x)
    xs = x + h * stencil.offsets
    wd = stencil.weights / h

    def dintegrand(t):
        # d/dx of tau coth(pi tau) B(x, tau) Ff(tau) by central differences
        b = bracket(xs[:, None], t[None, :])
        return (wd @ b) * _tau_over_sinh(t) * C(t)

    scan = np.linspace(0.0, tau_max, int(math.ceil(40 * tau_max)) + 1)
    d = dintegrand(scan)
    peak = np.max(np.abs(d))
    if peak == 0:
        return 0.0, "exact"
    n = scan.size
    head = np.max(np.abs(d[n // 4:n // 2]))
    tail = np.max(np.abs(d[3 * n // 4:]))
    if tail > 100.0 * max(head, cutoff * peak):
        raise IntegrabilityError(
            "the tau-integrand of the inversion grows; tau e^{pi tau} |Ff| is "
            "not integrable")
    zeros = _zero_crossings(scan, d)
    edges = np.concatenate([[0.0], zeros, [tau_max]])
    nodes, weights, owner = _segment_nodes(edges)
    seg = np.bincount(owner, weights=weights * dintegrand(nodes),
                      minlength=edges.size - 1)
    if tail <= cutoff * peak:
        return float(np.sum(seg)), "truncated"
    if summation == "none" or zeros.size < 6:
        raise IntegrabilityError(
            "the tau-integrand of the inversion has not decayed by "
            f"tau = {tau_max:g} (tail/peak = {tail / peak:.2e})")
    partial = np.cumsum(seg[:-1])
    return wynn_epsilon(partial), "wynn"


class FInverter:
    """Pointwise evaluator of the inversion of ``F``.

    Holds the tau-side data; :meth:`at` recovers ``f`` at one ``x``.  See
    :func:`invert_F_2_13` for the parameters.
    """

    def __init__(self, Ff, quad=None, stencil=None, *, tau_max=None,
                 summation="wynn"):
        quad = DEFAULT_QUAD if quad is None else quad
        self.stencil = DiffStencil() if stencil is None else stencil
        if self.stencil.order != 1:
            raise ValueError("the inversion needs a first-derivative stencil")
        if summation not in ("wynn", "none"):
            raise ValueError(f"unknown summation {summation!r}")
        self.summation = summation
        self.C, self.tau_max = _tau_side(Ff, tau_max)
        self.cutoff = max(quad.rel_tol, quad.tail_cutoff)

    def at(self, x):
        """Recovered ``f(x)`` together with how the tau-integral was closed."""
        if not (x > 0):
            raise DomainError("x must be positive")
        val, how = _invert_F_point(self.C, self.tau_max, float(x), self.stencil,
                                   self.cutoff, self.summation)
        return 2.0 * SQRT_PI * val, how


def invert_F_2_13(Ff, x_grid, quad=None, stencil=None, *, tau_max=None,
                  summation="wynn"):
    """Recover ``f`` from its forward transform.

    ``f(x) = 2 sqrt(pi) d/dx int_0^inf tau coth(pi tau) B(x, tau) (Ff)(tau)
    dtau`` with ``B`` from :func:`bracket`; the derivative is taken by central
    differences outside the integral.

    Parameters
    ----------
    Ff : ForwardResult, SampledFunction or callable
        Samples on a tau grid starting at 0 (interpolated by a cubic spline of
        ``Ff cosh(pi tau)``), or an exact callable.
    x_grid : array_like
        Strictly increasing positive output abscissae.
    quad : QuadConfig, optional
        ``tail_cutoff`` decides when the tau-integrand counts as decayed.
    stencil : DiffStencil, optional
        First-derivative stencil; defaults to fourth order accuracy.
    tau_max : float, optional
        Upper end of the tau range (default: end of the sampled grid, or 12
        for callables).
    summation : {"wynn", "none"}
        How to treat an integrand that oscillates without decaying by
        ``tau_max``: ``"wynn"`` integrates between consecutive zeros and
        extrapolates the partial sums with Wynn's epsilon algorithm,
        ``"none"`` raises :class:`IntegrabilityError`.

    Returns
    -------
    SampledFunction
        Recovered ``f`` on ``x_grid``.

    Raises
    ------
    IntegrabilityError
        If the integrand grows with ``tau`` or (with ``summation="none"``)
        has not decayed.
    """
    x = _output_grid(x_grid)
    if np.any(x <= 0):
        raise DomainError("x_grid must be positive")
    inv = FInverter(Ff, quad, stencil, tau_max=tau_max, summation=summation)
    vals = np.array([inv.at(xv)[0] for xv in x])
    return SampledFunction(x, vals, ("power", 1.0), name="invert_F")


# ---------------------------------------------------------------------------
# inversion of G


U_LO = -40.0


def _as_Gg(Gg):
    if isinstance(Gg, InverseResult):
        return Gg.to_sampled()
    if isinstance(Gg, SampledFunction) or callable(Gg):
        return Gg
    raise TypeError("Gg must be an InverseResult, SampledFunction or callable")


def _tail_fit(w, vals):
    """Fit ``sqrt(pi) w Gg(w^2)`` by its large-argument form on the given nodes."""
    basis = np.stack([np.ones_like(w), np.sin(2 * w), np.cos(2 * w),
                      np.sin(2 * w) / w, np.cos(2 * w) / w, 1.0 / w ** 2], axis=1)
    target = SQRT_PI * w * vals
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = np.max(np.abs(basis @ coef - target))
    return coef, resid / max(np.max(np.abs(target)), 1e-300)


def _tail_integrals(W):
    """``int_W^inf b(w) w^{-2} dw`` for the basis of :func:`_tail_fit`."""
    si, ci = special.sici(2.0 * W)
    s2, c2 = math.sin(2 * W), math.cos(2 * W)
    i_one = 1.0 / W
    i_sin = s2 / W - 2.0 * ci
    i_cos = c2 / W - 2.0 * (0.5 * math.pi - si)
    return np.array([i_one, i_sin, i_cos, 0.0, 0.0, 1.0 / (3 * W ** 3)])


class GInverter:
    """Pointwise evaluator of the inversion of ``G``.

    The values of ``Gg`` on the ``y`` nodes and the tail corrections are
    computed once; :meth:`at` then costs one bracket evaluation per node.
    See :func:`invert_G_3_5` for the parameters.
    """

    def __init__(self, Gg, quad=None, stencil=None, *, y_max=1e4,
                 strict=False):
        stencil = DiffStencil() if stencil is None else stencil
        Gg = _as_Gg(Gg)
        # y in (0, 1]: nodes in log y; y in [1, y_max]: nodes in w = sqrt y
        u, wu = _composite(U_LO, 0.0, 0.25)
        W = math.sqrt(y_max)
        w, ww = _composite(1.0, W, 0.5)
        self.y = np.concatenate([np.exp(u), w * w])
        self.dmu = np.concatenate([wu, 2.0 * ww / w])  # dy / y
        self.gy = np.asarray(Gg(self.y), dtype=float)
        self.h = min(stencil.step(1.0), 0.25) * self.y
        self.offsets = stencil.offsets
        self.weights = stencil.weights
        self.m0 = 0.0
        peak = np.max(np.abs(self.gy))
        if peak == 0:
            return
        # below y = e^{u_lo} treat Gg as c y^delta (delta > 0 for convergence)
        g_lo = np.asarray(Gg(np.exp([U_LO - 2.0, U_LO - 1.0])), dtype=float)
        head = 0.0
        if g_lo[1] != 0.0:
            ratio = g_lo[1] / g_lo[0] if g_lo[0] != 0.0 else math.inf
            delta = math.log(ratio) if ratio > 0 else -1.0
            if not delta > 0.05:
                raise IntegrabilityError("int_0^1 |Gg(t)| / t dt does not converge")
            head = g_lo[1] * math.exp(delta) / delta
        far = w >= 0.5 * W
        coef, resid = _tail_fit(w[far], self.gy[u.size:][far])
        if resid > 1e-3:
            raise IntegrabilityError(
                "Gg does not follow its large-y form y^{-1/2} (a + b sin 2 sqrt y + ...)")
        if strict and np.max(np.abs(coef[:3])) > 1e-8 * peak:
            raise IntegrabilityError("int_1^inf |Gg(t)| dt diverges")
        # beyond y_max only the constant part of the bracket matters; the
        # second term decays like 1/y there
        self.m0 = (head + float(np.sum(self.gy * self.dmu))
                   + 2.0 / SQRT_PI * float(coef @ _tail_integrals(W)))

    def at(self, x):
        """Recovered ``g(x)``."""
        xv = abs(float(x))
        if not np.any(self.gy):
            return 0.0
        y, h = self.y, self.h
        b = bracket(y[None, :] + h[None, :] * self.offsets[:, None], xv)
        db = (self.weights @ b) / h
        second = SQRT_PI * float(_x_coth(xv)) * float(np.sum(self.gy * y * db * self.dmu))
        return math.cosh(math.pi * xv) / (math.pi * SQRT_PI) * self.m0 + second


def invert_G_3_5(Gg, x_out_grid, quad=None, stencil=None, *, y_max=1e4,
                 strict=False):
    """Recover ``g`` from ``Gg``.

    ``g(x) = int_0^inf (Gg)(y) [cosh(pi x)/(pi sqrt(pi)) + sqrt(pi) x y
    coth(pi x) dB(y, x)/dy] dy / y`` with ``B`` from :func:`bracket` and the
    ``y``-derivative by central differences.

    Parameters
    ----------
    Gg : InverseResult, SampledFunction or callable
        Values of ``Gg`` on the positive half-line.  A callable (for instance
        from :func:`G_operator`) avoids interpolation error.
    x_out_grid : array_like
        Strictly increasing output abscissae (any sign; the formula is even
        in ``x``).
    quad : QuadConfig, optional
    stencil : DiffStencil, optional
        First-derivative stencil; the step is relative to ``y``.
    y_max : float
        Beyond ``y_max`` the integral is continued analytically from a fit of
        ``Gg`` to its large-``y`` form ``y^{-1/2} (a + b sin 2 sqrt y +
        c cos 2 sqrt y + ...)``.
    strict : bool
        Require ``int_1^inf |Gg| dy < inf`` (raise :class:`IntegrabilityError`
        otherwise).  By default only the weaker
        ``int_1^inf |Gg| dy / y < inf``, which is what the formula needs to
        converge, is checked.

    Returns
    -------
    SampledFunction
    """
    xo = _output_grid(x_out_grid)
    inv = GInverter(Gg, quad, stencil, y_max=y_max, strict=strict)
    out = np.array([inv.at(xv) for xv in xo])
    return SampledFunction(xo, out, ("exp", 1.0), domain="real_line",
                           name="invert_G")
