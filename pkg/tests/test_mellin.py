import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from sqbessel import catalog, specfun
from sqbessel.errors import DomainError, StripError
from sqbessel.mellin import (MellinStrip, SampledFunction, _mellin_callable,
                             gamma_cosine_pair_check, gamma_cosine_pair_tau_check,
                             inverse_mellin, mellin_transform, parseval_check)
from sqbessel.quad import ContourSpec, QuadConfig
from sqbessel.errors import TruncationWarning

X_GRID = np.geomspace(1e-3, 50, 80)


def exp_fn(rate=1.0):
    return SampledFunction.from_callable(
        lambda x: np.exp(-rate * x), X_GRID, ("exp", rate),
        mellin=lambda s: specfun.gamma(s) * rate ** (-s))


def indicator():
    return SampledFunction.from_callable(
        lambda x: (np.asarray(x) < 1).astype(float), X_GRID, ("exp", 1.0),
        mellin=lambda s: 1 / s)


class TestTypes:
    def test_strip_q(self):
        s = MellinStrip(0.25, p=1.5)
        assert s.q == pytest.approx(3.0)
        assert 1 / s.p + 1 / s.q == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("nu,p", [(0.3, 1.0), (0.3, 2.5), (float("nan"), 2.0)])
    def test_strip_invalid(self, nu, p):
        with pytest.raises(StripError):
            MellinStrip(nu, p)

    def test_forward_range(self):
        MellinStrip(0.2, p=2.0).check_forward()
        with pytest.raises(StripError):
            MellinStrip(0.6, p=2.0).check_forward()

    def test_non_monotone_grid(self):
        with pytest.raises(DomainError):
            SampledFunction([1.0, 3.0, 2.0], [1.0, 1.0, 1.0], ("exp", 1.0))

    def test_unknown_decay(self):
        with pytest.raises(DomainError):
            SampledFunction([1.0, 2.0], [1.0, 1.0], ("gauss", 1.0))

    def test_half_line_positive(self):
        with pytest.raises(DomainError):
            SampledFunction([0.0, 1.0], [1.0, 1.0], ("exp", 1.0))

    def test_interpolation_and_tail(self):
        x = np.linspace(0.5, 4, 50)
        f = SampledFunction(x, np.exp(-x), ("exp", 1.0))
        assert f(2.2) == pytest.approx(math.exp(-2.2), rel=1e-5)
        assert f(np.array([6.0]))[0] == pytest.approx(math.exp(-6.0), rel=1e-12)

    def test_dict_round_trip(self):
        f = SampledFunction([1.0, 2.0, 3.0], [3.0, 2.0, 1.0], ("power", 2.0))
        d = f.to_dict()
        assert d == {"domain": "half_line", "grid": [1.0, 2.0, 3.0],
                     "values": [3.0, 2.0, 1.0], "decay": {"kind": "power", "a": 2.0}}


class TestMellinTransform:
    def test_exponential(self):
        assert mellin_transform(lambda x: np.exp(-x), 3.0) == pytest.approx(2.0, abs=1e-10)

    def test_indicator(self):
        assert mellin_transform(lambda x: (x < 1).astype(float), 2.0) == pytest.approx(0.5, abs=1e-10)

    def test_k0sqrt(self):
        s = 0.5 + 1j
        ref = specfun.gamma(s) ** 2
        assert abs(mellin_transform(catalog.k0sqrt(), s) - ref) < 1e-9

    @given(st.floats(0.3, 4), st.floats(-6, 6))
    def test_exponential_property(self, a, b):
        s = complex(a, b)
        ref = specfun.gamma(s)
        assert abs(mellin_transform(lambda x: np.exp(-x), s) - ref) <= 1e-9 * max(1, abs(ref))

    def test_exp3sqrt_closed_form(self):
        f = catalog.exp3sqrt()
        for s in (0.4, 1.0 + 2j, 2.5):
            assert abs(mellin_transform(f, s) - f.mellin(s)) < 1e-9

    def test_outside_strip(self):
        f = SampledFunction.from_callable(lambda x: 1 / (1 + x) ** 2, X_GRID, ("power", 2.0))
        with pytest.raises(StripError):
            mellin_transform(f, 2.5)
        with pytest.raises(StripError):
            mellin_transform(f, -0.5)


class TestInverseMellin:
    def test_gamma(self):
        val = inverse_mellin(specfun.gamma, MellinStrip(1.0), 2.0)
        assert abs(val - math.exp(-2)) < 1e-11

    def test_gamma_squared(self):
        val = inverse_mellin(lambda s: specfun.gamma(s) ** 2, MellinStrip(0.5), 0.25,
                             ContourSpec(0.5, height=40))
        assert abs(val - 2 * special.k0(1.0)) < 1e-10

    def test_nondecaying_warns(self):
        with pytest.warns(TruncationWarning):
            inverse_mellin(lambda s: np.ones_like(s), MellinStrip(0.5), 1.0)

    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_numerical_round_trip_exponential(self, x):
        F = _mellin_callable(lambda t: np.exp(-t), QuadConfig(1e-13, 1e-13))
        val = inverse_mellin(F, MellinStrip(1.0), x, ContourSpec(1.0, height=36, step_hint=1.0))
        assert abs(val - math.exp(-x)) <= 1e-7 * math.exp(-x)

    @pytest.mark.parametrize("x", [0.1, 0.5, 2.0, 10.0])
    def test_round_trip_k0sqrt(self, x):
        f = catalog.k0sqrt()
        val = inverse_mellin(f.mellin, MellinStrip(0.5), x, ContourSpec(0.5, height=40))
        assert abs(val - f(x)) <= 1e-7 * abs(f(x))


class TestParseval:
    def test_exponentials(self):
        f = exp_fn()
        assert parseval_check(f, f, MellinStrip(0.5)) < 1e-8

    def test_contour_side_exponentials(self):
        """(1/2 pi i) int Gamma(s) Gamma(1-s) ds = int e^{-2x} dx = 1/2."""
        spec = ContourSpec(0.5, height=40, step_hint=0.5)
        rhs = inverse_mellin(lambda s: specfun.gamma(s) * specfun.gamma(1 - s),
                             MellinStrip(0.5), 1.0, spec)
        assert abs(rhs - 0.5) < 1e-8

    def test_indicator(self):
        assert parseval_check(exp_fn(), indicator(), MellinStrip(0.5)) < 1e-8

    def test_scale_covariance(self):
        assert parseval_check(exp_fn(2.0), exp_fn(), MellinStrip(0.5)) < 1e-8

    def test_numerical_transforms(self):
        """Without attached transforms both sides go through quadrature."""
        f = lambda x: np.exp(-x)
        g = lambda x: np.exp(-2 * x)
        spec = ContourSpec(0.5, height=30, step_hint=1.0)
        assert parseval_check(f, g, MellinStrip(0.5), QuadConfig(1e-12, 1e-12), spec) < 1e-8


class TestGammaCosine:
    def test_elementary(self):
        assert gamma_cosine_pair_check(1.0, 0.0) < 1e-12

    @pytest.mark.parametrize("s,tau", [(1.0, 1.0), (1.5, 2.0), (2 + 0.5j, 1.0)])
    def test_pair(self, s, tau):
        assert gamma_cosine_pair_check(s, tau) < 1e-9

    @pytest.mark.parametrize("y", [0.5, 1.0, 2.0])
    def test_swapped(self, y):
        assert gamma_cosine_pair_tau_check(1.0, y) < 1e-8

    @given(st.floats(0.3, 3), st.floats(0, 4))
    def test_property(self, s, tau):
        ref = abs(specfun.gamma(s + 1j * tau)) ** 2
        assert gamma_cosine_pair_check(s, tau) <= 1e-9 * max(1, ref)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_cosine_pair_check(-0.5, 1.0)
