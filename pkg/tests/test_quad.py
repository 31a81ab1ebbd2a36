import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from sqbessel.errors import ContourError, DomainError, QuadratureError
from sqbessel.quad import (ContourSpec, DiffStencil, QuadConfig, differentiate,
                           fd_step, integrate_interval, integrate_real_line,
                           integrate_semi_infinite, integrate_vertical_line)
from sqbessel.specfun import loggamma
from sqbessel.errors import TruncationWarning

from oracles import kix_iz_integral


class TestConfig:
    def test_defaults(self):
        q = QuadConfig()
        assert (q.abs_tol, q.rel_tol, q.max_depth, q.tail_cutoff) == (1e-10, 1e-10, 40, 1e-16)

    @pytest.mark.parametrize("kw", [dict(abs_tol=0), dict(rel_tol=-1), dict(max_depth=0), dict(tail_cutoff=0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            QuadConfig(**kw)

    def test_contour_invalid(self):
        with pytest.raises(ContourError):
            ContourSpec(abscissa=0.1, height=0)
        with pytest.raises(ContourError):
            ContourSpec(abscissa=0.1, step_hint=-1)

    def test_stencil_invalid(self):
        with pytest.raises(ValueError):
            DiffStencil(order=4)
        with pytest.raises(ValueError):
            DiffStencil(h=0)


class TestSemiInfinite:
    def test_exponential(self):
        assert integrate_semi_infinite(lambda x: np.exp(-x)).value == pytest.approx(1, abs=1e-12)

    def test_root_exponential(self):
        assert integrate_semi_infinite(lambda x: np.exp(-np.sqrt(x))).value == pytest.approx(2, abs=1e-10)

    def test_error_estimate_within_tolerance(self):
        cfg = QuadConfig(abs_tol=1e-12, rel_tol=1e-12)
        res = integrate_semi_infinite(lambda x: np.exp(-x) * np.cos(3 * x), cfg, wavelength=2 * math.pi / 3)
        assert abs(res.value - 0.1) < 1e-12
        assert res.error <= max(cfg.abs_tol, cfg.rel_tol * abs(res.value))

    def test_tuple_unpacking(self):
        value, err = integrate_semi_infinite(lambda x: np.exp(-2 * x))
        assert value == pytest.approx(0.5)
        assert err >= 0

    def test_nonfinite_integrand(self):
        with pytest.raises(DomainError):
            integrate_semi_infinite(lambda x: np.where(x > 1, np.nan, 1.0))

    def test_unreachable_tolerance(self):
        cfg = QuadConfig(abs_tol=1e-15, rel_tol=1e-15, max_depth=2)
        with pytest.raises(QuadratureError):
            integrate_semi_infinite(lambda x: np.sin(40 * x) / (1 + x), cfg)

    @pytest.mark.parametrize("x,z", [(1.0, 0.5), (2.0, 0.25)])
    def test_macdonald_times_modified_bessel(self, x, z):
        """int K_{ix}(y) I_z(y) dy/y = 1/(x^2 + z^2)."""
        assert kix_iz_integral(x, z) == pytest.approx(1 / (x * x + z * z), rel=1e-8)

    def test_refinement_monotone(self):
        f = lambda x: np.exp(-x) * np.cos(x) ** 2 / (1 + x)
        errs = []
        for tol in (1e-6, 1e-8, 1e-10, 1e-12):
            errs.append(integrate_semi_infinite(f, QuadConfig(abs_tol=tol, rel_tol=tol)).error)
        assert all(b <= a for a, b in zip(errs, errs[1:]))

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 4), st.floats(0.2, 4))
    def test_linearity(self, a, b, p, q):
        f = lambda x: np.exp(-p * x)
        g = lambda x: np.exp(-q * np.sqrt(x))
        combo = integrate_semi_infinite(lambda x: a * f(x) + b * g(x)).value
        parts = a * integrate_semi_infinite(f).value + b * integrate_semi_infinite(g).value
        assert abs(combo - parts) <= 1e-9 * (abs(a) / p + abs(b) * 2 / q ** 2 + 1)

    def test_scipy_oracle(self):
        f = lambda x: special.k0(x) * np.cos(x)
        ref, _ = integrate.quad(lambda x: special.k0(x) * math.cos(x), 0, np.inf, limit=200)
        assert integrate_semi_infinite(f).value == pytest.approx(ref, rel=1e-9)


class TestFinite:
    def test_interval(self):
        assert integrate_interval(np.sin, 0, math.pi).value == pytest.approx(2, abs=1e-13)

    def test_endpoint_singularity(self):
        # the error of the end panel shrinks like sqrt(width): needs deep bisection
        cfg = QuadConfig(abs_tol=1e-10, rel_tol=1e-10, max_depth=90)
        assert integrate_interval(lambda x: 1 / np.sqrt(x), 0, 1, cfg).value == pytest.approx(2, abs=1e-9)

    def test_depth_limit(self):
        with pytest.raises(QuadratureError):
            integrate_interval(lambda x: 1 / np.sqrt(x), 0, 1, QuadConfig(max_depth=40))

    def test_real_line(self):
        res = integrate_real_line(lambda t: np.exp(-t * t))
        assert res.value == pytest.approx(math.sqrt(math.pi), abs=1e-12)


class TestVerticalLine:
    def test_gamma_inverts_to_exponential(self):
        spec = ContourSpec(abscissa=0.5, height=60)
        val = integrate_vertical_line(loggamma, 1.0, spec, log=True)
        assert abs(val - math.exp(-1)) < 1e-12
        assert abs(val.imag) < 1e-9

    def test_gamma_squared(self):
        spec = ContourSpec(abscissa=0.5, height=60)
        val = integrate_vertical_line(lambda s: 2 * loggamma(s), 1.0, spec, log=True)
        assert abs(val.real - 2 * special.k0(2)) < 1e-12

    def test_contour_shift(self):
        a = integrate_vertical_line(loggamma, 1.0, ContourSpec(0.5, 60), log=True)
        b = integrate_vertical_line(loggamma, 1.0, ContourSpec(1.5, 60), log=True)
        assert abs(a - b) < 1e-10

    def test_truncation_warning(self):
        with pytest.warns(TruncationWarning):
            integrate_vertical_line(lambda s: 1 / (1 + s * s) ** 0.25, 1.0, ContourSpec(0.5, 10))

    def test_no_warning_when_decayed(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            integrate_vertical_line(loggamma, 2.0, ContourSpec(0.5, 60), log=True)

    def test_bent_contour(self):
        spec = ContourSpec(abscissa=0.5, height=20, bend=0.5, bend_from=2)
        val = integrate_vertical_line(loggamma, 3.0, spec, log=True)
        assert abs(val - math.exp(-3)) < 1e-12

    def test_bad_argument(self):
        with pytest.raises(DomainError):
            integrate_vertical_line(loggamma, 0.0, ContourSpec(0.5))


class TestDifferentiate:
    def test_cubic_third_derivative(self):
        st3 = DiffStencil(order=3, h=0.1)
        assert differentiate(lambda x: x ** 3, 0.7, st3) == pytest.approx(6, abs=1e-10)

    def test_exponential(self):
        st1 = DiffStencil(order=1, h=1e-3, accuracy=4)
        assert abs(differentiate(math.exp, 0.0, st1) - 1) < 1e-10

    def test_sine_second(self):
        assert abs(differentiate(math.sin, 0.0, DiffStencil(order=2))) < 1e-8

    def test_default_step(self):
        assert fd_step(1, 4, 10.0) == pytest.approx(np.finfo(float).eps ** 0.2 * 10)
        assert DiffStencil(order=2, accuracy=2).step(0.5) == fd_step(2, 2, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            differentiate(math.sqrt, 1e-4, DiffStencil(h=1e-3), domain=(0, math.inf))

    @pytest.mark.parametrize("order", [1, 2, 3])
    @pytest.mark.parametrize("acc", [2, 4])
    def test_polynomial_exactness(self, order, acc):
        # central stencils of accuracy p are exact on polynomials of degree order + p - 1
        deg = order + acc - 1
        f = lambda x: x ** deg
        exact = math.factorial(deg) / math.factorial(deg - order) * 1.3 ** (deg - order)
        got = differentiate(f, 1.3, DiffStencil(order=order, h=0.05, accuracy=acc))
        assert got == pytest.approx(exact, rel=1e-8)

    def test_array_valued(self):
        out = differentiate(lambda x: np.array([x, x * x]), 2.0, DiffStencil(h=1e-2))
        assert np.allclose(out, [1, 4])
