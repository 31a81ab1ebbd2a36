"""Built-in test functions.

=========  ======================  ==========  ===============================
name       formula                 side        notes
=========  ======================  ==========  ===============================
exp3sqrt   exp(-3 sqrt x)          x > 0       finite norm in L1(e^{2 sqrt x})
k0sqrt     2 K_0(2 sqrt x)         x > 0       Mellin transform Gamma(s)^2
gauss      exp(-tau^2)             real line   L1 norm sqrt(pi)
t2gauss    tau^2 exp(-tau^2)       real line   even, g(0) = g'(0) = 0
=========  ======================  ==========  ===============================

``k0sqrt`` is the natural test function for the forward transform but its
norm in ``L1(e^{2 sqrt x} dx)`` diverges (``2K_0(2 sqrt x) e^{2 sqrt x}`` only
decays like ``x^{-1/4}``); the transform itself converges absolutely.
"""

import math

import numpy as np
from scipy import special

from . import specfun
from .mellin import SampledFunction

__all__ = ["BUILTINS", "builtin", "exp3sqrt", "k0sqrt", "gauss", "t2gauss"]

_X_GRID = np.geomspace(1e-4, 400.0, 161)
_T_GRID = np.linspace(-8.0, 8.0, 161)


def _exp3sqrt(x):
    return np.exp(-3.0 * np.sqrt(np.asarray(x, dtype=float)))


def _k0sqrt(x):
    # real order: scipy's K_0 is exact here and much faster than the
    # imaginary-order routine
    return 2.0 * special.k0(2.0 * np.sqrt(np.asarray(x, dtype=float)))


def _gauss(t):
    t = np.asarray(t, dtype=float)
    return np.exp(-t * t)


def _t2gauss(t):
    t = np.asarray(t, dtype=float)
    return t * t * np.exp(-t * t)


def exp3sqrt():
    """``exp(-3 sqrt x)``; Mellin transform ``2 Gamma(2s) / 3^{2s}``."""
    return SampledFunction.from_callable(
        _exp3sqrt, _X_GRID, ("exp_sqrt", 3.0), name="exp3sqrt",
        mellin=lambda s: 2.0 * specfun.gamma(2.0 * s) * np.exp(-2.0 * s * math.log(3.0)))


def k0sqrt():
    """``2 K_0(2 sqrt x)``; Mellin transform ``Gamma(s)^2``."""
    return SampledFunction.from_callable(
        _k0sqrt, _X_GRID, ("exp_sqrt", 2.0), name="k0sqrt",
        mellin=lambda s: specfun.gamma(s) ** 2)


def gauss():
    """``exp(-tau^2)`` on the real line."""
    return SampledFunction.from_callable(
        _gauss, _T_GRID, ("exp", 1.0), domain="real_line", name="gauss")


def t2gauss():
    """``tau^2 exp(-tau^2)`` on the real line."""
    return SampledFunction.from_callable(
        _t2gauss, _T_GRID, ("exp", 1.0), domain="real_line", name="t2gauss")


BUILTINS = {"exp3sqrt": exp3sqrt, "k0sqrt": k0sqrt, "gauss": gauss,
            "t2gauss": t2gauss}


def builtin(name):
    """Return the built-in function called ``name``."""
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from "
                       f"{sorted(BUILTINS)}") from None
