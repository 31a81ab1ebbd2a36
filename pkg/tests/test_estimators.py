import math

import numpy as np
import pytest
from scipy import integrate, special
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from sqbessel import catalog
from sqbessel.estimators import ForwardTransformer, InverseGTransformer, KernelTransformer
from sqbessel.kernel import phi_direct
from sqbessel.mellin import mellin_transform
from sqbessel.transform import forward_F, inverse_G


class TestCatalog:
    @pytest.mark.parametrize("name", sorted(catalog.BUILTINS))
    def test_builtin(self, name):
        f = catalog.builtin(name)
        assert f.name == name
        assert np.all(np.isfinite(f.values))

    def test_unknown(self):
        with pytest.raises(KeyError):
            catalog.builtin("airy")

    def test_k0sqrt_value(self):
        assert catalog.k0sqrt()(1.0) == pytest.approx(2 * special.k0(2.0), rel=1e-15)

    def test_even_entries(self):
        t = np.linspace(0, 5, 11)
        for f in (catalog.gauss(), catalog.t2gauss()):
            assert np.array_equal(f(t), f(-t))

    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5 + 2j])
    def test_mellin_exp3sqrt(self, s):
        f = catalog.exp3sqrt()
        ref = 2 * special.gamma(2 * s) / 3 ** (2 * s)
        assert f.mellin(s) == pytest.approx(ref, rel=1e-12)

    def test_mellin_k0sqrt(self):
        # int 2 K_0(2 sqrt x) x^{s-1} dx by scipy against Gamma(s)^2
        s = 1.5
        val = integrate.quad(lambda x: 2 * special.k0(2 * math.sqrt(x)) * x ** (s - 1),
                             0, np.inf, limit=200)[0]
        assert catalog.k0sqrt().mellin(s) == pytest.approx(val, rel=1e-8)
        assert mellin_transform(catalog.k0sqrt(), s) == pytest.approx(val, rel=1e-8)


class TestKernelTransformer:
    def test_direct(self):
        X = np.array([[0.0, 4.0], [1.0, 2.0], [3.0, 0.5]])
        out = KernelTransformer().fit_transform(X)
        assert out.shape == (3, 1)
        assert np.allclose(out[:, 0], phi_direct(X[:, 0], X[:, 1]), rtol=0, atol=0)

    @pytest.mark.parametrize("method", ["mellin_barnes", "cosine_rep"])
    def test_methods(self, method):
        X = np.array([[0.5, 1.0], [2.0, 3.0]])
        out = KernelTransformer(method=method).fit_transform(X)
        assert np.allclose(out[:, 0], phi_direct(X[:, 0], X[:, 1]), atol=1e-8)

    def test_width(self):
        with pytest.raises(ValueError):
            KernelTransformer().fit(np.ones((2, 3)))

    def test_method(self):
        with pytest.raises(ValueError):
            KernelTransformer(method="fft").fit(np.ones((2, 2)))

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            KernelTransformer().transform(np.ones((2, 2)))

    def test_clone(self):
        est = clone(KernelTransformer(method="cosine_rep"))
        assert est.get_params() == {"method": "cosine_rep"}


class TestForwardTransformer:
    def setup_method(self):
        self.x = np.geomspace(1e-4, 400.0, 161)
        self.taus = np.array([0.0, 1.0, 2.0])

    def test_matches_forward(self):
        f = catalog.exp3sqrt()
        rows = np.vstack([f(self.x), 0.5 * f(self.x)])
        est = ForwardTransformer(self.x, self.taus, decay=("exp_sqrt", 3.0))
        out = est.fit_transform(rows)
        ref = forward_F(f, self.taus, method="direct").values
        assert out.shape == (2, 3)
        assert np.allclose(out[0], ref, atol=1e-6)
        assert np.allclose(out[1], 0.5 * out[0], atol=1e-12)

    def test_norm_enforced(self):
        f = catalog.k0sqrt()
        est = ForwardTransformer(self.x, self.taus, decay=("exp_sqrt", 2.0))
        with pytest.raises(ArithmeticError):
            est.fit_transform(f(self.x)[None, :])

    def test_width(self):
        est = ForwardTransformer(self.x, self.taus)
        with pytest.raises(ValueError):
            est.fit(np.ones((1, 5)))

    def test_width_changed(self):
        est = ForwardTransformer(self.x, self.taus).fit(np.ones((1, self.x.size)))
        with pytest.raises(ValueError):
            est.transform(np.ones((1, 5)))

    def test_pipeline(self):
        f = catalog.exp3sqrt()
        pipe = make_pipeline(ForwardTransformer(self.x, self.taus, decay=("exp_sqrt", 3.0)))
        assert pipe.fit_transform(f(self.x)[None, :]).shape == (1, 3)


class TestInverseGTransformer:
    def test_matches_inverse(self):
        t = np.linspace(-8.0, 8.0, 321)
        xs = np.array([0.5, 2.0, 8.0])
        g = catalog.gauss()
        out = InverseGTransformer(t, xs).fit_transform(g(t)[None, :])
        ref = inverse_G(g, xs).values
        assert np.allclose(out[0], ref, atol=1e-5)

    def test_rows(self):
        t = np.linspace(-8.0, 8.0, 161)
        xs = np.array([1.0, 2.0])
        rows = np.vstack([catalog.gauss()(t), catalog.t2gauss()(t)])
        out = InverseGTransformer(t, xs).fit_transform(rows)
        assert out.shape == (2, 2)
        assert np.all(np.abs(out) <= math.pi)
