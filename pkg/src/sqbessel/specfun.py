"""Complex-parameter special functions evaluated in double precision.

Everything here is written from series, asymptotic expansions and
positive-kernel integrals; nothing is delegated to ``scipy.special``.
All functions broadcast over numpy arrays.  Scalar inputs give scalar
outputs.

The orders that matter downstream are purely imaginary (``nu = i*tau``),
where ``J_{i tau}(x)`` is complex for real ``x`` and
``J_{-i tau}(x) = conj(J_{i tau}(x))``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, QuadratureError

__all__ = [
    "SeriesConfig",
    "loggamma",
    "gamma",
    "rgamma",
    "digamma",
    "bessel_j",
    "bessel_j_dnu",
    "bessel_i",
    "bessel_i_scaled",
    "macdonald_k",
    "macdonald_k_scaled",
    "struve_l1_imag",
]

# J: power series up to J_SERIES_Z (cancellation ~ e^z), Schlafli's integral in
# between, Hankel expansion beyond J_ASYMPTOTIC_Z where it is accurate.
J_SERIES_Z = 8.0
J_ASYMPTOTIC_Z = 25.0
# Struve L1(2iw): series below, Poisson integral in between, asymptotics above.
STRUVE_SERIES_W = 8.0
STRUVE_ASYMPTOTIC_W = 20.0

_EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation policy for power series."""

    rel_tol: float = 1e-14
    max_terms: int = 400

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesConfig()


def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


_GL32 = _gauss_legendre(32)
_GL64 = _gauss_legendre(64)


def _scalar_out(value, *inputs):
    if all(np.ndim(a) == 0 for a in inputs):
        return value[()] if isinstance(value, np.ndarray) else value
    return value


def _check_finite(value, what):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{what}: non-finite result (overflow or invalid argument)")
    return value


# ---------------------------------------------------------------------------
# Gamma family

# Lanczos approximation, g = 607/128, 15 terms.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS = np.array([
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
])
_LOG_SQRT_2PI = 0.91893853320467274178


def _is_pole(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _log_sin_pi(z):
    """log(sin(pi z)) on some branch; safe for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z.imag) < 15.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = np.log(np.sin(np.pi * z[small]))
    big = ~small
    if np.any(big):
        zb = z[big]
        # sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2i) for Im z > 0
        up = zb.imag > 0
        w = np.where(up, zb, np.conj(zb))
        val = -1j * np.pi * w + np.log(0.5j) + np.log1p(-np.exp(2j * np.pi * w))
        out[big] = np.where(up, val, np.conj(val))
    return out


def _loggamma_right(z):
    # valid for Re z >= 1/2
    ser = np.full_like(z, _LANCZOS[0])
    for j in range(1, 15):
        ser = ser + _LANCZOS[j] / (z + j)
    t = z + _LANCZOS_G + 0.5
    return (z + 0.5) * np.log(t) - t + np.log(2.5066282746310005 * ser / z)


def loggamma(z):
    """Logarithm of the gamma function for complex ``z``.

    The imaginary part is not normalised to the principal branch; the
    result is meant to be exponentiated (possibly after summing several
    log-gammas, which avoids intermediate overflow).
    """
    za = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_pole(za)):
        raise PoleError("gamma has poles at non-positive integers")
    left = za.real < 0.5
    out = np.empty_like(za)
    out[~left] = _loggamma_right(za[~left])
    if np.any(left):
        zl = za[left]
        out[left] = np.log(np.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return _scalar_out(out.reshape(np.shape(z)), z)


def gamma(z):
    """Euler's gamma function of a complex argument.

    Raises
    ------
    PoleError
        If ``z`` is a non-positive integer.
    """
    val = np.exp(np.asarray(loggamma(z)))
    return _scalar_out(_check_finite(val, "gamma"), z)


def rgamma(z):
    """Reciprocal gamma function ``1/Gamma(z)``, zero at the poles."""
    za = np.asarray(z, dtype=complex)
    poles = _is_pole(za)
    safe = np.where(poles, 0.5, za)
    val = np.exp(-np.asarray(loggamma(safe)))
    val = np.where(poles, 0.0, val)
    return _scalar_out(val, z)


_BERNOULLI_2K = np.array([
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510,
])


def digamma(z):
    """Logarithmic derivative of the gamma function.

    Shifts the argument up by ten with the recurrence, then sums the
    Stirling series; reflection handles ``Re z < 1/2``.
    """
    za = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_pole(za)):
        raise PoleError("digamma has poles at non-positive integers")
    left = za.real < 0.5
    w = np.where(left, 1.0 - za, za)
    acc = np.zeros_like(w)
    for k in range(10):
        acc -= 1.0 / (w + k)
    w = w + 10.0
    w2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for k in range(len(_BERNOULLI_2K) - 1, -1, -1):
        series = series * w2 + _BERNOULLI_2K[k] / (2 * (k + 1))
    psi = acc + np.log(w) - 0.5 / w - series * w2
    if np.any(left):
        zl = za[left]
        psi[left] = psi[left] - np.pi / np.tan(np.pi * zl)
    return _scalar_out(psi.reshape(np.shape(z)), z)


# ---------------------------------------------------------------------------
# Hankel asymptotic expansion shared by J, Y, I and K


def _hankel_terms(nu, z, max_terms=60, with_dnu=False):
    """Asymptotic sums P, Q (and dP/dnu, dQ/dnu) for large ``z``.

    ``a_k(nu) = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k)``; P collects even
    k with alternating signs, Q odd k.  Summation stops per element at the
    smallest term.  Returns the sums and the magnitude of the last term used.
    """
    nu = np.asarray(nu, dtype=complex)
    z = np.asarray(z, dtype=float)
    nu, z = np.broadcast_arrays(nu, z)
    mu = 4.0 * nu * nu
    P = np.ones(nu.shape, dtype=complex)
    Q = np.zeros(nu.shape, dtype=complex)
    dP = np.zeros(nu.shape, dtype=complex)
    dQ = np.zeros(nu.shape, dtype=complex)
    term = np.ones(nu.shape, dtype=complex)  # a_k / z^k
    dterm = np.zeros(nu.shape, dtype=complex)
    active = np.ones(nu.shape, dtype=bool)
    last = np.zeros(nu.shape)
    prev_mag = np.full(nu.shape, np.inf)
    for k in range(1, max_terms + 1):
        factor = (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        new_dterm = dterm * factor + term * (8.0 * nu) / (8.0 * k * z)
        new_term = term * factor
        mag = np.abs(new_term)
        grow = mag > prev_mag
        active &= ~grow
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            P = np.where(active, P + sign * new_term, P)
            dP = np.where(active, dP + sign * new_dterm, dP)
        else:
            Q = np.where(active, Q + sign * new_term, Q)
            dQ = np.where(active, dQ + sign * new_dterm, dQ)
        last = np.where(active, mag, last)
        scale = np.maximum(np.abs(P), np.abs(Q))
        active &= ~(mag < 1e-17 * scale)
        term, dterm, prev_mag = new_term, new_dterm, mag
        if not np.any(active):
            break
    if with_dnu:
        return P, Q, dP, dQ, last
    return P, Q, last


# ---------------------------------------------------------------------------
# Bessel J of complex order


def _bessel_j_series(nu, z, cfg, with_dnu, with_err=False):
    half = z / 2.0
    q = -(half * half)
    tiny = np.finfo(float).tiny
    logh = np.log(np.where(half > 0, half, 1.0))
    term = np.exp(nu * logh) * rgamma(nu + 1.0)
    term = np.where(half > 0, term, np.where(nu == 0, 1.0, 0.0))
    total = term.copy()
    if with_dnu:
        psi = digamma(nu + 1.0)
        dtotal = term * (logh - psi)
    peak = np.abs(term)
    for k in range(1, cfg.max_terms + 1):
        term = term * q / (k * (k + nu))
        total = total + term
        if with_dnu:
            psi = psi + 1.0 / (k + nu)
            dtotal = dtotal + term * (logh - psi)
        mag = np.abs(term)
        peak = np.maximum(peak, mag)
        done = (k > half) & ((mag <= cfg.rel_tol * np.abs(total)) | (mag <= 1e-30 * peak + tiny))
        if np.all(done):
            break
    else:
        raise ConvergenceError(f"Bessel series not converged in {cfg.max_terms} terms")
    if with_err:
        # rounding accumulates on the largest term
        return (total, dtotal if with_dnu else None, 1e-16 * np.sqrt(k) * peak)
    return (total, dtotal) if with_dnu else (total, None)


def _bessel_j_asymptotic(nu, z, with_dnu):
    """Hankel expansion; also returns a mask of points where it is accurate."""
    omega = z - nu * (np.pi / 2) - np.pi / 4
    amp = np.sqrt(2.0 / (np.pi * z))
    P, Q, dP, dQ, last = _hankel_terms(nu, z, with_dnu=True)
    ok = last <= 1e-15 * np.maximum(np.abs(P), np.abs(Q))
    c, s = np.cos(omega), np.sin(omega)
    val = amp * (P * c - Q * s)
    dval = amp * (dP * c - dQ * s + (np.pi / 2) * (P * s + Q * c)) if with_dnu else None
    return val, dval, ok


def _bessel_j_schlafli(nu, z, with_dnu):
    """Schlafli's integral on a shifted contour, ``Re z > 0``.

    With the vertical part of Sommerfeld's contour moved to ``Re t = a``,

    ``J_nu(z) = (1/2pi) int_{-pi}^{pi} exp(z sinh(a + i th) - nu (a + i th)) dth
    - (sin(nu pi)/pi) int_a^inf exp(-z sinh u - nu u) du``.

    ``a = 0`` is the textbook form, whose integrand reaches ``exp(pi |tau|)``
    for ``nu = s + i tau`` against a result of size ``exp(pi |tau| / 2)``.
    Taking ``z sinh a = 1.4 |tau|`` lowers the peak to about
    ``exp(1.77 |tau|)``.  Returns the value, the order derivative (or None)
    and an estimate of the absolute rounding error.
    """
    a = np.arcsinh(1.4 * np.abs(nu.imag) / z)
    za = z * np.cosh(a)
    n1 = int(64 + 2.4 * np.max(za) + 4.0 * np.max(np.abs(nu)))
    u, wu = _gauss_legendre(n1)
    th = np.pi * u
    wth = 0.5 * wu  # (1/2pi) * pi
    t = a[:, None] + 1j * th[None, :]
    ex = np.exp(z[:, None] * np.sinh(t) - nu[:, None] * t)
    i1 = ex @ wth
    err = 1e-16 * np.max(np.abs(ex), axis=1)
    T = np.arcsinh(np.sinh(a) + 50.0 / z)
    v, wv = _GL64
    half = 0.5 * (T - a)
    uu = a[:, None] + half[:, None] * (v[None, :] + 1.0)
    wt = half[:, None] * wv[None, :]
    e = np.exp(-z[:, None] * np.sinh(uu) - nu[:, None] * uu) * wt
    i2 = e.sum(axis=1)
    sin_nu = np.sin(np.pi * nu) / np.pi
    val = i1 - sin_nu * i2
    err = err + 1e-16 * np.abs(sin_nu * i2)
    if not with_dnu:
        return val, None, err
    di1 = -((ex * t) @ wth)
    di2 = -(e * uu).sum(axis=1)
    dval = di1 - np.cos(np.pi * nu) * i2 - sin_nu * di2
    return val, dval, err


# the power series can beat the integral beyond J_SERIES_Z only when the
# order is large against z^2/4; past this argument it never does in practice
_SERIES_RESCUE_Z = 60.0


def _bessel_j_impl(nu, z, cfg, with_dnu):
    nu_a = np.asarray(nu, dtype=complex)
    z_a = np.asarray(z, dtype=float)
    if np.any(z_a < 0) or not np.all(np.isfinite(z_a)):
        raise DomainError("bessel_j needs a finite argument z >= 0")
    nu_b, z_b = np.broadcast_arrays(nu_a, z_a)
    nu_b = np.atleast_1d(nu_b).ravel()
    z_b = np.atleast_1d(z_b).ravel()
    if np.any((z_b == 0) & (nu_b.real < 0)):
        raise DomainError("J_nu(0) is singular for Re nu < 0")
    neg_int = _is_pole(nu_b) & (nu_b.real < 0)
    if np.any(neg_int):
        raise DomainError("negative integer orders are not supported")
    if np.any(np.abs(nu_b.real) > 2.0) and np.any(z_b > J_SERIES_Z):
        raise DomainError("orders with |Re nu| > 2 are only supported for z <= 8")
    val = np.empty(nu_b.shape, dtype=complex)
    dval = np.empty(nu_b.shape, dtype=complex)
    series = z_b <= J_SERIES_Z
    rest = np.flatnonzero(~series)
    if np.any(series):
        v, d = _bessel_j_series(nu_b[series], z_b[series], cfg, with_dnu)
        val[series] = v
        if with_dnu:
            dval[series] = d
    if rest.size:
        big = rest[z_b[rest] > J_ASYMPTOTIC_Z]
        if big.size:
            v, d, ok = _bessel_j_asymptotic(nu_b[big], z_b[big], with_dnu)
            val[big[ok]] = v[ok]
            if with_dnu:
                dval[big[ok]] = d[ok]
            done = np.zeros(nu_b.shape, dtype=bool)
            done[big[ok]] = True
            rest = rest[~done[rest]]
        if rest.size:
            v, d, err = _bessel_j_schlafli(nu_b[rest], z_b[rest], with_dnu)
            val[rest] = v
            if with_dnu:
                dval[rest] = d
            # large imaginary orders: the series may lose fewer digits
            cand = rest[(z_b[rest] <= _SERIES_RESCUE_Z)
                        & (err[:] > 1e-14 * np.abs(v))]
            if cand.size:
                sv, sd, serr = _bessel_j_series(nu_b[cand], z_b[cand], cfg,
                                                with_dnu, with_err=True)
                pos = np.searchsorted(rest, cand)
                better = serr < err[pos]
                val[cand[better]] = sv[better]
                if with_dnu:
                    dval[cand[better]] = sd[better]
    shape = np.broadcast_shapes(np.shape(nu_a), np.shape(z_a))
    val = _check_finite(val, "bessel_j").reshape(shape)
    if with_dnu:
        dval = _check_finite(dval, "bessel_j_dnu").reshape(shape)
        return _scalar_out(val, nu, z), _scalar_out(dval, nu, z)
    return _scalar_out(val, nu, z)


def bessel_j(nu, z, cfg=DEFAULT_SERIES):
    """Bessel function of the first kind ``J_nu(z)`` for complex order.

    Parameters
    ----------
    nu : complex or array_like
        Order.
    z : float or array_like
        Non-negative real argument.
    cfg : SeriesConfig
        Truncation of the power series.

    Returns
    -------
    complex or ndarray
        Power series for ``z <= 8``, Hankel expansion for ``z > 25`` when it
        converges to full precision, Schlafli's integral otherwise.
    """
    return _bessel_j_impl(nu, z, cfg, with_dnu=False)


def bessel_j_dnu(nu0, z, cfg=DEFAULT_SERIES):
    """Derivative of ``J_nu(z)`` with respect to the order, at ``nu = nu0``.

    Each series term is multiplied by ``log(z/2) - digamma(k + nu + 1)``.
    """
    return _bessel_j_impl(nu0, z, cfg, with_dnu=True)[1]


def bessel_j_and_dnu(nu, z, cfg=DEFAULT_SERIES):
    """``(J_nu(z), dJ_nu(z)/dnu)`` from one pass over the series."""
    return _bessel_j_impl(nu, z, cfg, with_dnu=True)


# ---------------------------------------------------------------------------
# Modified Bessel I


def _bessel_i_series_scaled(nu, x, cfg):
    half = x / 2.0
    q = half * half
    logh = np.log(np.where(half > 0, half, 1.0))
    term = np.exp(nu * logh - x) * rgamma(nu + 1.0)
    term = np.where(half > 0, term, np.where(nu == 0, 1.0, 0.0))
    total = term.copy()
    for k in range(1, cfg.max_terms + 1):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all((k > half) & (np.abs(term) <= cfg.rel_tol * np.abs(total))):
            break
    else:
        raise ConvergenceError(f"modified Bessel series not converged in {cfg.max_terms} terms")
    return total


def bessel_i_scaled(nu, x, cfg=DEFAULT_SERIES):
    """Exponentially scaled modified Bessel function ``exp(-x) I_nu(x)``.

    Series for moderate ``x``; for ``x > 30 + |nu|^2`` the large-argument
    expansion ``(2 pi x)^{-1/2} sum (-1)^k a_k(nu) / x^k`` (the exponentially
    small companion term is dropped).
    """
    nu_a = np.asarray(nu, dtype=complex)
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a < 0) or not np.all(np.isfinite(x_a)):
        raise DomainError("bessel_i needs a finite argument x >= 0")
    nu_b, x_b = np.broadcast_arrays(nu_a, x_a)
    out = np.empty(nu_b.shape, dtype=complex)
    big = x_b > 30.0 + np.abs(nu_b) ** 2
    if np.any(~big):
        out[~big] = _bessel_i_series_scaled(nu_b[~big], x_b[~big], cfg)
    if np.any(big):
        xb = x_b[big]
        out[big] = _alt_sum(nu_b[big], xb) / np.sqrt(2 * np.pi * xb)
    return _scalar_out(_check_finite(out, "bessel_i"), nu, x)


def _alt_sum(nu, x, sign=-1.0, max_terms=60):
    """``sum_k sign^k a_k(nu) / x^k`` truncated at its smallest term."""
    mu = 4.0 * nu * nu
    term = np.ones(nu.shape, dtype=complex)
    total = term.copy()
    active = np.ones(nu.shape, dtype=bool)
    prev = np.full(nu.shape, np.inf)
    for k in range(1, max_terms + 1):
        term = term * sign * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = np.abs(term)
        active &= mag <= prev
        total = np.where(active, total + term, total)
        active &= ~(mag < 1e-17 * np.abs(total))
        prev = mag
        if not np.any(active):
            break
    return total


def bessel_i(nu, x, cfg=DEFAULT_SERIES):
    """Modified Bessel function of the first kind ``I_nu(x)``, ``x >= 0``."""
    val = np.asarray(bessel_i_scaled(nu, x, cfg)) * np.exp(np.asarray(x, dtype=float))
    return _scalar_out(_check_finite(val, "bessel_i"), nu, x)


# ---------------------------------------------------------------------------
# Macdonald function of imaginary order




def _cosh_integral_scaled(tau, x, tol, max_level=12):
    """``exp(x) K_{i tau}(x) = int_0^T exp(-x(cosh t - 1)) cos(tau t) dt``.

    Composite 32-point Gauss-Legendre on ``[0, T]``; the panel count doubles
    until two successive levels agree.  ``T`` is where the integrand drops
    below ``exp(-45)``.
    """
    T = np.arccosh(1.0 + 45.0 / x)
    nodes, weights = _GL32
    n_panels = int(max(4, np.ceil(T * (1.0 + np.max(np.abs(tau)) / 4.0))))
    prev = None
    for _ in range(max_level):
        edges = np.linspace(0.0, T, n_panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        base = np.exp(-2.0 * x * np.sinh(0.5 * t) ** 2) * w
        val = np.cos(np.outer(tau, t)) @ base
        if prev is not None and np.all(np.abs(val - prev) <= tol * np.maximum(1.0, np.abs(val))):
            return val
        prev = val
        n_panels *= 2
    raise QuadratureError("cosh-integral for K_{i tau} did not converge")


def macdonald_k_scaled(tau, x, quad=None):
    """``exp(x) K_{i tau}(x)`` for real ``tau`` and ``x > 0``."""
    tol = 1e-14 if quad is None else max(quad.rel_tol * 1e-3, 1e-15)
    tau_a = np.asarray(tau, dtype=float)
    x_a = np.asarray(x, dtype=float)
    if np.any(x_a <= 0) or not np.all(np.isfinite(x_a)):
        raise DomainError("macdonald_k needs x > 0")
    tau_b, x_b = np.broadcast_arrays(tau_a, x_a)
    out = np.empty(tau_b.shape)
    big = x_b > 30.0 + tau_b ** 2
    if np.any(big):
        xb = x_b[big]
        s = _alt_sum(1j * tau_b[big], xb, sign=1.0)
        out[big] = (np.sqrt(np.pi / (2 * xb)) * s).real
    if np.any(~big):
        flat_tau = tau_b[~big]
        flat_x = x_b[~big]
        res = np.empty(flat_tau.shape)
        for xv in np.unique(flat_x):
            sel = flat_x == xv
            res[sel] = _cosh_integral_scaled(flat_tau[sel], xv, tol)
        out[~big] = res
    return _scalar_out(out, tau, x)


def macdonald_k(tau, x, quad=None):
    """Macdonald function ``K_{i tau}(x) = int_0^inf exp(-x cosh t) cos(tau t) dt``.

    Real for real ``tau`` and ``x > 0``, even in ``tau``.  Large ``x`` uses the
    Hankel expansion instead of the integral.
    """
    val = np.asarray(macdonald_k_scaled(tau, x, quad)) * np.exp(-np.asarray(x, dtype=float))
    return _scalar_out(val, tau, x)


# ---------------------------------------------------------------------------
# Modified Struve L1 on the imaginary axis


def _struve_series(w, cfg):
    w2 = w * w
    term = -w2 * 8.0 / (3.0 * np.pi)  # -w^2 / (Gamma(3/2) Gamma(5/2))
    total = term.copy()
    for k in range(1, cfg.max_terms + 1):
        term = term * (-w2) / ((k + 0.5) * (k + 1.5))
        total = total + term
        if np.all((k > w) & (np.abs(term) <= cfg.rel_tol * np.maximum(np.abs(total), 1e-300))):
            return total
    raise ConvergenceError("Struve series not converged")


def _struve_h1_poisson(x):
    """``H1(x) = (2x/pi) int_0^{pi/2} cos^2(p) sin(x sin p) dp``."""
    n = int(40 + 6 * np.ceil(np.max(x)))
    nodes, weights = _gauss_legendre(n)
    p = 0.25 * np.pi * (nodes + 1.0)
    w = 0.25 * np.pi * weights * np.cos(p) ** 2
    return (2.0 * x / np.pi) * (np.sin(np.outer(x, np.sin(p))) @ w)


def _struve_h1_minus_y1(x):
    """Large-``x`` expansion of ``H1(x) - Y1(x) = (2/pi)(1 + 1/x^2 - 3/x^4 ...)``.

    Summed up to the smallest term; accurate to ~1e-15 for ``x >= 20``.
    """
    x = np.asarray(x, dtype=float)
    # (1/pi) sum_k Gamma(k+1/2)/Gamma(3/2-k) (x/2)^{-2k}
    inv = (2.0 / x) ** 2
    term = np.full_like(x, 2.0)
    total = term.copy()
    prev = np.abs(term)
    active = np.ones_like(x, dtype=bool)
    for k in range(1, 40):
        term = term * (k - 0.5) * (1.5 - k) * inv
        mag = np.abs(term)
        active &= mag <= prev
        total = np.where(active, total + term, total)
        prev = mag
    return total / np.pi


def _struve_h1_asymptotic(x):
    # Y1 from the Hankel expansion
    nu = np.ones_like(x, dtype=complex)
    P, Q, _ = _hankel_terms(nu, x)
    omega = x - 0.75 * np.pi
    y1 = (np.sqrt(2.0 / (np.pi * x)) * (P * np.sin(omega) + Q * np.cos(omega))).real
    return y1 + _struve_h1_minus_y1(x)


def struve_l1_imag(w, cfg=DEFAULT_SERIES):
    """Real value of the modified Struve function ``L1(2 i w)`` for ``w >= 0``.

    Uses ``L1(2iw) = -H1(2w)``: the alternating power series for ``w <= 8``,
    the Poisson integral for ``8 < w <= 20`` and the large-argument expansion
    ``H1 = Y1 + (2/pi)(1 + 1/x^2 - ...)`` beyond.  Tends to ``-2/pi``.
    """
    w_a = np.asarray(w, dtype=float)
    if np.any(w_a < 0) or not np.all(np.isfinite(w_a)):
        raise DomainError("struve_l1_imag needs finite w >= 0")
    flat = np.atleast_1d(w_a).ravel()
    out = np.empty_like(flat)
    s = flat <= STRUVE_SERIES_W
    a = flat > STRUVE_ASYMPTOTIC_W
    m = ~s & ~a
    if np.any(s):
        out[s] = _struve_series(flat[s], cfg)
    if np.any(m):
        out[m] = -_struve_h1_poisson(2.0 * flat[m])
    if np.any(a):
        out[a] = -_struve_h1_asymptotic(2.0 * flat[a])
    out = out.reshape(np.shape(w_a))
    return _scalar_out(out, w)
