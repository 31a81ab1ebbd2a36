import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqbessel import specfun
from sqbessel.errors import PoleError
from sqbessel.quad import DiffStencil, differentiate

mp.mp.dps = 30


def mp_j(nu, z):
    return complex(mp.besselj(mp.mpc(nu.real, nu.imag), z))


class TestGamma:
    def test_factorial(self):
        assert abs(specfun.gamma(5) - 24) < 1e-12

    def test_half(self):
        assert abs(specfun.gamma(0.5) - math.sqrt(math.pi)) < 1e-14

    def test_modulus_on_imaginary_shift(self):
        """|Gamma(1+i)|^2 = pi / sinh(pi)."""
        val = abs(specfun.gamma(1 + 1j))
        assert abs(val - math.sqrt(math.pi / math.sinh(math.pi))) < 1e-14
        assert abs(val - 0.5215640) < 1e-7

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            specfun.gamma(z)
        with pytest.raises(PoleError):
            specfun.digamma(z)

    @given(st.floats(-45, 45), st.floats(-45, 45))
    def test_against_mpmath(self, a, b):
        z = complex(a, b)
        if abs(z) > 50 or (abs(b) < 1e-3 and a <= 0.5 and abs(a - round(a)) < 1e-3):
            return
        ref = complex(mp.gamma(mp.mpc(a, b)))
        if ref == 0 or not cmath.isfinite(ref):
            return
        assert abs(specfun.gamma(z) / ref - 1) < 1e-12

    @given(st.floats(0.01, 0.99), st.floats(-3, 3))
    def test_reflection(self, a, b):
        z = complex(a, b)
        val = specfun.gamma(z) * specfun.gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
        assert abs(val - 1) < 1e-12

    def test_loggamma_continuous_on_vertical_line(self):
        t = np.linspace(-60, 60, 2001)
        lg = specfun.loggamma(0.125 + 1j * t)
        assert np.max(np.abs(np.diff(lg.imag))) < 1.0

    def test_rgamma_zero_at_poles(self):
        assert specfun.rgamma(-3) == 0


class TestDigamma:
    def test_recurrence(self):
        assert abs(specfun.digamma(2) - specfun.digamma(1) - 1) < 1e-13

    def test_half(self):
        ref = -0.57721566490153286 - 2 * math.log(2)
        assert abs(specfun.digamma(0.5) - ref) < 1e-13

    def test_against_gamma_difference(self):
        h = 1e-6
        z = 1 + 1j
        fd = (specfun.gamma(z + h) - specfun.gamma(z - h)) / (2 * h * specfun.gamma(z))
        assert abs(specfun.digamma(z) - fd) < 1e-8

    @given(st.floats(-30, 30), st.floats(-30, 30))
    def test_against_mpmath(self, a, b):
        if abs(b) < 1e-3 and a <= 0.5 and abs(a - round(a)) < 1e-2:
            return
        ref = complex(mp.digamma(mp.mpc(a, b)))
        assert abs(specfun.digamma(complex(a, b)) - ref) <= 1e-11 * max(1, abs(ref))


class TestBesselJ:
    def test_order_zero_at_origin(self):
        assert abs(specfun.bessel_j(0, 1e-12) - 1) < 1e-15

    def test_half_integer(self):
        assert abs(specfun.bessel_j(0.5, math.pi / 2) - 2 / math.pi) < 1e-14

    def test_imaginary_order_bound(self):
        val = abs(specfun.bessel_j(1j, 2.0))
        assert val <= math.e ** 2 * math.sqrt(math.sinh(math.pi) / math.pi)

    @pytest.mark.parametrize("nu", [0, 0.5, 1j, 1 + 1j, 2.5j, 0.3 - 4j])
    @pytest.mark.parametrize("z", [0.05, 0.7, 3.0, 8.5, 15.0, 24.0, 30.0, 60.0])
    def test_against_mpmath(self, nu, z):
        ref = mp_j(complex(nu), z)
        tol = 1e-9 if z > 25 else 1e-12
        scale = max(abs(ref), 1e-3)
        assert abs(specfun.bessel_j(nu, z) - ref) <= tol * scale * math.cosh(math.pi * abs(complex(nu).imag) / 2)

    @given(st.floats(-6, 6), st.floats(0.01, 40))
    def test_conjugate_symmetry(self, tau, z):
        a = specfun.bessel_j(1j * tau, z)
        b = specfun.bessel_j(-1j * tau, z)
        assert abs(a - np.conj(b)) <= 1e-15 * max(1, abs(a))

    @given(st.floats(0, 2), st.floats(0.01, 30))
    def test_bound_1_7(self, re_nu, z):
        nu = complex(re_nu, 1.0)
        bnd = (z / 2) ** re_nu * math.exp(z) / abs(specfun.gamma(nu + 1))
        assert abs(specfun.bessel_j(nu, z)) <= bnd * (1 + 1e-12)

    @pytest.mark.parametrize("nu", [0, 0.5, 1j, 1 + 1j])
    @pytest.mark.parametrize("z", [0.5, 2.0, 7.0, 12.0, 20.0])
    def test_bessel_ode(self, nu, z):
        f = lambda t: specfun.bessel_j(nu, t)
        st2 = DiffStencil(order=2, h=1e-2 * z ** 0.5)
        st1 = DiffStencil(order=1, h=1e-3)
        u = f(z)
        res = z * z * differentiate(f, z, st2) + z * differentiate(f, z, st1) + (z * z - nu * nu) * u
        assert abs(res) <= 1e-6 * max(1, abs(u) * z * z)

    @pytest.mark.parametrize("z", [20.0, 40.0, 100.0])
    def test_leading_asymptotic(self, z):
        lead = math.sqrt(2 / (math.pi * z)) * math.cos(z - math.pi / 4)
        j0 = specfun.bessel_j(0, z).real
        assert abs(j0 - lead) <= 2 / z * math.sqrt(2 / (math.pi * z))

    def test_vectorised(self):
        z = np.array([0.5, 5.0, 50.0])
        out = specfun.bessel_j(1j, z)
        assert out.shape == (3,)
        for zi, oi in zip(z, out):
            assert oi == specfun.bessel_j(1j, zi)


class TestOrderDerivative:
    @pytest.mark.parametrize("nu0,z", [(1j, 1.0), (0, 2.0), (-2j, 5.0), (0.5 + 1j, 10.0), (1j, 30.0)])
    def test_finite_difference_oracle(self, nu0, z):
        h = 1e-6
        fd = (specfun.bessel_j(nu0 + h, z) - specfun.bessel_j(nu0 - h, z)) / (2 * h)
        assert abs(specfun.bessel_j_dnu(nu0, z) - fd) < 1e-8

    def test_mpmath(self):
        ref = complex(mp.diff(lambda v: mp.besselj(v, 3), mp.mpc(0, 1.5)))
        assert abs(specfun.bessel_j_dnu(1.5j, 3.0) - ref) < 1e-12

    @given(st.floats(-4, 4), st.floats(0.05, 30))
    def test_conjugate_symmetry(self, tau, z):
        a = specfun.bessel_j_dnu(1j * tau, z)
        b = specfun.bessel_j_dnu(-1j * tau, z)
        assert abs(a - np.conj(b)) <= 1e-14 * max(1, abs(a))


class TestBesselI:
    def test_origin(self):
        assert abs(specfun.bessel_i(0, 1e-12) - 1) < 1e-15

    def test_half_integer(self):
        ref = math.sqrt(2 / math.pi) * math.sinh(1)
        assert abs(specfun.bessel_i(0.5, 1.0) - ref) < 1e-14
        assert abs(ref - 0.9376748) < 1e-7

    @pytest.mark.parametrize("nu", [0.25, 1j, 2 + 0.5j])
    @pytest.mark.parametrize("x", [0.01, 1.0, 10.0, 50.0, 300.0])
    def test_scaled_against_mpmath(self, nu, x):
        ref = complex(mp.besseli(mp.mpc(complex(nu).real, complex(nu).imag), x) * mp.exp(-x))
        assert abs(specfun.bessel_i_scaled(nu, x) - ref) <= 1e-11 * max(abs(ref), 1e-3)

    def test_scaled_envelope(self):
        """e^{-x/2} Re I_{i tau}(x/2) stays bounded and decays like x^{-1/2}."""
        x = np.geomspace(1e-3, 1e3, 61)
        v = np.abs(np.real(specfun.bessel_i_scaled(1j, x / 2)))
        assert np.all(v < 2)
        assert np.all(v[x > 10] * np.sqrt(x[x > 10]) < 2)


class TestMacdonald:
    def test_order_zero(self):
        ref = 0.42102443824070834
        assert abs(specfun.macdonald_k(0, 1.0) - ref) < 1e-13

    @pytest.mark.parametrize("tau", [0.0, 0.5, 1.0, 3.0, 8.0])
    @pytest.mark.parametrize("x", [1e-3, 0.2, 1.0, 6.0, 40.0, 120.0])
    def test_against_mpmath(self, tau, x):
        ref = float(mp.besselk(mp.mpc(0, tau), x).real)
        # the cosine integral cancels down from the size of K_0(x)
        scale = float(mp.besselk(0, x))
        assert abs(specfun.macdonald_k(tau, x) - ref) <= 1e-12 * max(scale, abs(ref))

    @given(st.floats(0, 10), st.floats(0.01, 50))
    def test_even(self, tau, x):
        assert specfun.macdonald_k(-tau, x) == pytest.approx(specfun.macdonald_k(tau, x), abs=1e-15)

    def test_bound_example(self):
        """The bound holds at tau = 1, x = 4 (it fails elsewhere)."""
        assert abs(specfun.macdonald_k(1.0, 4.0)) <= 4 ** -0.25 / math.sqrt(math.sinh(math.pi))

    def test_bound_counterexample(self):
        """x^{-1/4} / sqrt(sinh pi tau) is exceeded near x = 0.42, tau = 1."""
        ref = float(mp.besselk(1j, 0.42).real)
        bnd = 0.42 ** -0.25 / math.sqrt(math.sinh(math.pi))
        assert ref > bnd
        assert specfun.macdonald_k(1.0, 0.42) == pytest.approx(ref, rel=1e-12)


class TestStruve:
    def test_zero(self):
        assert specfun.struve_l1_imag(0.0) == 0.0

    @pytest.mark.parametrize("w", [0.3, 1.0, 5.0, 8.5, 14.0, 19.0, 25.0, 50.0])
    def test_matches_h1(self, w):
        """L_1(2iw) = -H_1(2w)."""
        ref = -float(mp.struveh(1, 2 * w))
        assert abs(specfun.struve_l1_imag(w) - ref) < 1e-11

    def test_h1_integral_oracle(self):
        """-H_1(2) from its Poisson integral by scipy quadrature."""
        from scipy.integrate import quad
        # H_1(z) = (2z/pi) int_0^1 sqrt(1 - t^2) sin(zt) dt
        h1 = 4 / math.pi * quad(lambda t: (1 - t * t) ** 0.5 * math.sin(2 * t), 0, 1, epsabs=1e-14)[0]
        assert abs(specfun.struve_l1_imag(1.0) + h1) < 1e-12

    def test_plateau(self):
        assert abs(specfun.struve_l1_imag(50.0) + 2 / math.pi) < 0.05
