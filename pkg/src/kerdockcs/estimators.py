"""scikit-learn compatible transformers over rows of 1D signals.

Each row of ``X`` is one signal of length ``2**m``.  These wrap the
functional API so the transforms and samplers drop into a ``Pipeline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from ._validation import log2_length
from .kerdock import KerdockParams, kerdock_adjoint, kerdock_forward
from .multiscale import MultiscaleOperator, validate_strategy
from .solver import SolverConfig, solve_bp
from .transforms import fwht_paley, haar_forward_flat, haar_inverse_flat

__all__ = [
    "WalshHadamardTransformer",
    "HaarTransformer",
    "KerdockSampler",
    "MultiscaleSampler",
]


class _PowerOfTwoMixin:
    def _fit_length(self, X):
        X = validate_data(self, X, dtype=float)
        self.m_ = log2_length(X.shape[1])
        return X

    def _check(self, X, reset=False):
        check_is_fitted(self)
        return validate_data(self, X, dtype=float, reset=reset)


class WalshHadamardTransformer(_PowerOfTwoMixin, TransformerMixin, BaseEstimator):
    """Row-wise orthonormal WHT in Paley order (self-inverse)."""

    def fit(self, X, y=None):
        self._fit_length(X)
        return self

    def transform(self, X):
        return fwht_paley(self._check(X))

    def inverse_transform(self, X):
        check_is_fitted(self)
        return fwht_paley(check_array(X, dtype=float))


class HaarTransformer(_PowerOfTwoMixin, TransformerMixin, BaseEstimator):
    """Row-wise orthonormal Haar transform, coefficients coarse to fine."""

    def fit(self, X, y=None):
        self._fit_length(X)
        return self

    def transform(self, X):
        return haar_forward_flat(self._check(X))

    def inverse_transform(self, X):
        check_is_fitted(self)
        return haar_inverse_flat(check_array(X, dtype=float))


class KerdockSampler(_PowerOfTwoMixin, TransformerMixin, BaseEstimator):
    """Apply ``K^{m,p}`` to each row; ``m`` is inferred from the row length.

    Parameters
    ----------
    p : int
        Log2 of the compression factor.
    """

    def __init__(self, p=1):
        self.p = p

    def fit(self, X, y=None):
        self._fit_length(X)
        self.params_ = KerdockParams.build(self.m_ - self.p, self.p)
        return self

    def transform(self, X):
        return kerdock_forward(self._check(X), self.params_)

    def adjoint(self, Y):
        check_is_fitted(self)
        return kerdock_adjoint(check_array(Y, dtype=float), self.params_)


class MultiscaleSampler(_PowerOfTwoMixin, TransformerMixin, BaseEstimator):
    """Deterministic multi-scale sampling with basis-pursuit inversion.

    ``transform`` returns the measurements of each row; ``inverse_transform``
    reconstructs signals by solving basis pursuit over Haar coefficients.

    Parameters
    ----------
    strategy : str or sequence of int
        Per-scale subsampling powers, one per Haar scale.
    max_iterations, tolerance, relaxation, shrink
        Forwarded to :class:`~kerdockcs.solver.SolverConfig`.
    """

    def __init__(self, strategy="0", max_iterations=2000, tolerance=1e-6, relaxation=1.0, shrink=1.0):
        self.strategy = strategy
        self.max_iterations = max_iterations
        self.tolerance = tolerance
        self.relaxation = relaxation
        self.shrink = shrink

    def fit(self, X, y=None):
        self._fit_length(X)
        self.strategy_ = validate_strategy(self.m_, self.strategy)
        self.operator_ = MultiscaleOperator(self.strategy_)
        self.layout_ = self.operator_.layout
        self.n_measurements_ = self.operator_.n_measurements
        return self

    def transform(self, X):
        return self.operator_.forward(self._check(X))

    def adjoint(self, Y):
        check_is_fitted(self)
        return self.operator_.adjoint(check_array(Y, dtype=float))

    def inverse_transform(self, Y):
        check_is_fitted(self)
        Y = check_array(Y, dtype=float)
        if Y.shape[1] != self.n_measurements_:
            raise ValueError(f"expected {self.n_measurements_} measurements, got {Y.shape[1]}")
        cfg = SolverConfig(self.max_iterations, self.tolerance, self.relaxation, self.shrink)
        A = self.operator_.linear_operator(ndim=1)
        self.reports_ = [solve_bp(A, row, cfg) for row in Y]
        return haar_inverse_flat(np.stack([r.solution for r in self.reports_]))
