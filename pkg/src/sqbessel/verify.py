"""Verification suites: numerical checks of the identities and bounds.

Each suite returns a :class:`SuiteReport` whose ``checks`` list the measured
quantity, its tolerance and the verdict.  The command-line ``verify`` command
prints them and exits non-zero when a suite fails.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog, kernel, specfun, transform
from .mellin import MellinStrip, gamma_cosine_pair_check, gamma_cosine_pair_tau_check
from .pde import WedgeSpec, ivp_check, pde_residual_polar

__all__ = ["Check", "SuiteReport", "SUITES", "run_suite",
           "KERNEL_TAUS", "KERNEL_XS"]

KERNEL_TAUS = (0.0, 0.5, 1.0, 2.0, 4.0)
KERNEL_XS = (0.1, 1.0, 5.0, 20.0)


@dataclass(frozen=True)
class Check:
    label: str
    value: float
    tol: float

    @property
    def ok(self):
        return bool(self.value <= self.tol)


@dataclass
class SuiteReport:
    name: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def add(self, label, value, tol):
        self.checks.append(Check(label, float(value), float(tol)))


def lemma1():
    """Direct, Mellin-Barnes and cosine-representation kernels agree."""
    rep = SuiteReport("lemma1")
    for tau in KERNEL_TAUS:
        for x in KERNEL_XS:
            d = kernel.phi_direct(tau, x)
            mb = kernel.phi_mellin_barnes(tau, x)
            cr = kernel.phi_cosine_rep(tau, x)
            rep.add(f"mb tau={tau:g} x={x:g}", abs(d - mb) / (1 + abs(d)), 1e-8)
            rep.add(f"cosine tau={tau:g} x={x:g}", abs(d - cr) / (1 + abs(d)), 1e-5)
    return rep


def lemma2():
    """Normalised residual of the kernel's third-order ODE."""
    rep = SuiteReport("lemma2")
    for tau in KERNEL_TAUS:
        for x in KERNEL_XS:
            r = kernel.ode_residual(tau, x, normalized=True)
            rep.add(f"ode tau={tau:g} x={x:g}", abs(r), 1e-6)
    return rep


def _count(label, excess, rep):
    viol = int(np.sum(excess > 0))
    rep.add(f"{label} violations (of {excess.size})", viol, 0)
    return viol


def bounds():
    """Bessel, kernel, Macdonald and norm inequalities on sample grids."""
    rep = SuiteReport("bounds")
    # |J_{i tau}(x)| <= e^x sqrt(sinh(pi tau) / (pi tau))
    x = np.linspace(0.01, 10.0, 25)[None, :]
    tau = np.linspace(0.1, 5.0, 25)[:, None]
    j = np.abs(specfun.bessel_j(1j * tau, x))
    bnd = np.exp(x) * np.sqrt(np.sinh(math.pi * tau) / (math.pi * tau))
    _count("bessel", j - bnd * (1 + 1e-12), rep)
    # |Re J_{i tau}(sqrt x)^2| / cosh(pi tau) <= 1
    x = np.geomspace(1e-3, 1e3, 41)[None, :]
    tau = np.linspace(-8.0, 8.0, 41)[:, None]
    k = np.abs(kernel.phi_direct(tau, x)) / kernel.SQRT_PI
    _count("kernel", k - (1 + 1e-12), rep)
    # |K_{i tau}(x)| <= x^{-1/4} / sqrt(sinh(pi tau))
    x = np.geomspace(0.1, 50.0, 25)
    tau = np.linspace(0.25, 5.0, 20)
    kv = np.abs(np.array([specfun.macdonald_k(tau, xv) for xv in x])).T
    bnd = x[None, :] ** -0.25 / np.sqrt(np.sinh(math.pi * tau))[:, None]
    ratio = kv / bnd
    _count("macdonald", ratio - (1 + 1e-12), rep)
    i, jx = np.unravel_index(np.argmax(ratio), ratio.shape)
    rep.notes.append(f"macdonald: max |K|/bound = {ratio[i, jx]:.6f} at "
                     f"tau={tau[i]:.4g}, x={x[jx]:.4g}")
    # sup |Ff| <= sqrt(pi) ||f||_{L1(e^{2 sqrt x})}
    taus = np.linspace(0.0, 6.0, 25)
    for name in ("exp3sqrt", "k0sqrt"):
        f = catalog.builtin(name)
        res = transform.forward_F(f, taus, enforce_norm=False)
        if math.isfinite(res.weighted_norm):
            excess = np.abs(res.values) - kernel.SQRT_PI * res.weighted_norm
            _count(f"forward norm {name}", excess, rep)
        else:
            rep.notes.append(f"forward norm {name}: weighted norm diverges, "
                             "bound not applicable")
    xs = np.geomspace(0.01, 100.0, 25)
    for name in ("gauss", "t2gauss"):
        res = transform.inverse_G(catalog.builtin(name), xs)
        excess = np.abs(res.values) - kernel.SQRT_PI * res.l1_norm_g
        _count(f"inverse norm {name}", excess, rep)
    return rep


def gamma_cosine():
    rep = SuiteReport("gamma-cosine")
    for s in (1.0, 1.5, 2 + 0.5j):
        for t in (0.0, 1.0, 2.0):
            rep.add(f"pair s={s} tau={t:g}", gamma_cosine_pair_check(s, t), 1e-9)
            rep.add(f"pair s={s} y={t:g}", gamma_cosine_pair_tau_check(s, t), 1e-9)
    return rep


def theorem1():
    """Direct forward transform against the modified-Bessel route."""
    rep = SuiteReport("theorem1")
    f = catalog.k0sqrt()
    taus = [0.5, 1.0, 2.0]
    a = transform.forward_F(f, taus, method="direct", enforce_norm=False)
    b = transform.forward_F_via_phi(f, taus, MellinStrip(0.25))
    for t, u, v in zip(taus, a.values, b.values):
        rep.add(f"route tau={t:g}", abs(u - v) / abs(v), 1e-6)
    return rep


def theorem3():
    rep = SuiteReport("theorem3")
    g = catalog.gauss()
    for y in (1.0, 4.0):
        rep.add(f"identity y={y:g}",
                transform.identity_3_2_check(g, MellinStrip(0.25), y), 1e-5)
    return rep


def roundtrip_f():
    rep = SuiteReport("roundtrip-f")
    f = catalog.k0sqrt()
    taus = np.linspace(0.0, 12.0, 241)
    ff = transform.forward_F(f, taus, enforce_norm=False)
    xs = np.linspace(0.5, 5.0, 19)
    rec = transform.invert_F_2_13(ff, xs)
    ref = f(xs)
    rep.add("relative sup error", np.max(np.abs(rec.values - ref)) / np.max(np.abs(ref)), 1e-2)
    return rep


def roundtrip_g():
    rep = SuiteReport("roundtrip-g")
    g = catalog.t2gauss()
    Gg = transform.G_operator(g)
    ts = np.linspace(0.5, 3.0, 11)
    rec = transform.invert_G_3_5(Gg, ts)
    ref = g(ts)
    rep.add("relative sup error", np.max(np.abs(rec.values - ref)) / np.max(np.abs(ref)), 5e-2)
    return rep


PDE_POINTS = ((2.0, 0.5), (5.0, 1.0), (0.5, 0.2))


def pde_suite():
    rep = SuiteReport("pde")
    g = catalog.gauss()
    wedge = WedgeSpec(math.pi)
    for r, th in PDE_POINTS:
        rep.add(f"residual r={r:g} theta={th:g}",
                abs(pde_residual_polar(g, r, th, wedge)), 1e-4)
    rep.add("initial condition", ivp_check(g, wedge, np.geomspace(0.01, 100.0, 25)), 1e-10)
    return rep


SUITES = {
    "lemma1": lemma1,
    "lemma2": lemma2,
    "bounds": bounds,
    "gamma-cosine": gamma_cosine,
    "theorem1": theorem1,
    "theorem3": theorem3,
    "roundtrip-f": roundtrip_f,
    "roundtrip-g": roundtrip_g,
    "pde": pde_suite,
}


def run_suite(name):
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn()
