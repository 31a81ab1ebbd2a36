"""scikit-learn style wrappers around the functional core.

The transforms are stateless, so ``fit`` only validates the input width and
records it; ``transform`` maps each row (a function sampled on a fixed grid)
to its transform sampled on the output grid.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import kernel, transform
from .mellin import SampledFunction
from .quad import QuadConfig

__all__ = ["KernelTransformer", "ForwardTransformer", "InverseGTransformer"]


class KernelTransformer(TransformerMixin, BaseEstimator):
    """Evaluate the kernel on rows ``(tau, x)``.

    Parameters
    ----------
    method : {"direct", "mellin_barnes", "cosine_rep"}
    """

    def __init__(self, method="direct"):
        self.method = method

    def fit(self, X, y=None):
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError("X must have two columns (tau, x)")
        if self.method not in kernel.METHODS:
            raise ValueError(f"method must be one of {kernel.METHODS}")
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if self.method == "direct":
            out = kernel.phi_direct(X[:, 0], X[:, 1])
        else:
            out = np.array([kernel.phi(t, x, method=self.method) for t, x in X])
        return np.asarray(out, dtype=float).reshape(-1, 1)


class _GridTransformer(TransformerMixin, BaseEstimator):
    def _quad(self):
        return QuadConfig(abs_tol=self.abs_tol, rel_tol=self.rel_tol)

    def fit(self, X, y=None):
        X = check_array(X)
        grid = np.asarray(self.input_grid, dtype=float)
        if X.shape[1] != grid.size:
            raise ValueError(
                f"X has {X.shape[1]} columns but input_grid has {grid.size} points")
        self.n_features_in_ = grid.size
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError("X width changed since fit")
        return np.vstack([self._row(r) for r in X])


class ForwardTransformer(_GridTransformer):
    """Rows of ``f`` sampled on ``input_grid`` (x > 0) to ``Ff`` on ``output_grid``.

    Parameters
    ----------
    input_grid, output_grid : array_like
    decay : (str, float)
        Decay tag of the sampled functions.
    enforce_norm : bool
    abs_tol, rel_tol : float
    """

    def __init__(self, input_grid, output_grid, decay=("exp", 1.0),
                 enforce_norm=True, abs_tol=1e-10, rel_tol=1e-10):
        self.input_grid = input_grid
        self.output_grid = output_grid
        self.decay = decay
        self.enforce_norm = enforce_norm
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol

    def _row(self, row):
        f = SampledFunction(np.asarray(self.input_grid, dtype=float), row,
                            tuple(self.decay))
        res = transform.forward_F(f, self.output_grid, self._quad(),
                                  method="direct",
                                  enforce_norm=self.enforce_norm)
        return res.values


class InverseGTransformer(_GridTransformer):
    """Rows of ``g`` sampled on ``input_grid`` (real line) to ``Gg`` on ``output_grid``."""

    def __init__(self, input_grid, output_grid, decay=("exp", 1.0),
                 abs_tol=1e-10, rel_tol=1e-10):
        self.input_grid = input_grid
        self.output_grid = output_grid
        self.decay = decay
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol

    def _row(self, row):
        g = SampledFunction(np.asarray(self.input_grid, dtype=float), row,
                            tuple(self.decay), domain="real_line")
        return transform.inverse_G(g, self.output_grid, self._quad()).values
