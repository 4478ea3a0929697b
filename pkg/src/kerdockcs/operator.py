"""Matrix-free linear operators with a diagonal Gram matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["LinearOperator", "OperatorError", "identity_operator", "matrix_operator"]


class OperatorError(ValueError):
    """The operator fails its adjoint or Gram-diagonal contract."""


@dataclass(frozen=True)
class LinearOperator:
    """``A`` given by its action, its adjoint, and the diagonal of ``A A^T``.

    ``forward`` maps arrays of ``in_shape`` to ``out_shape``; ``gram`` has
    ``out_shape`` and holds strictly positive weights.
    """

    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    gram: np.ndarray
    in_shape: tuple[int, ...]
    out_shape: tuple[int, ...]

    def __post_init__(self):
        gram = np.broadcast_to(np.asarray(self.gram, dtype=float), self.out_shape)
        if not (gram > 0).all():
            raise OperatorError("Gram diagonal must be strictly positive")
        object.__setattr__(self, "gram", gram)

    @property
    def n_in(self) -> int:
        return int(np.prod(self.in_shape))

    @property
    def n_out(self) -> int:
        return int(np.prod(self.out_shape))

    def dot_test(self, rng=None, trials: int = 1) -> float:
        """Worst relative mismatch of ``<A w, y>`` and ``<w, A^T y>``."""
        rng = np.random.default_rng(0) if rng is None else rng
        worst = 0.0
        for _ in range(trials):
            w = rng.standard_normal(self.in_shape)
            y = rng.standard_normal(self.out_shape)
            Aw, Aty = self.forward(w), self.adjoint(y)
            lhs, rhs = np.vdot(Aw, y), np.vdot(w, Aty)
            scale = np.linalg.norm(Aw) * np.linalg.norm(y) + np.linalg.norm(w) * np.linalg.norm(Aty)
            worst = max(worst, abs(lhs - rhs) / max(scale, np.finfo(float).tiny))
        return worst

    def gram_test(self, rng=None, trials: int = 1) -> float:
        """Worst relative error of ``A A^T y = gram * y``."""
        rng = np.random.default_rng(1) if rng is None else rng
        worst = 0.0
        for _ in range(trials):
            y = rng.standard_normal(self.out_shape)
            err = np.linalg.norm(self.forward(self.adjoint(y)) - self.gram * y)
            worst = max(worst, err / np.linalg.norm(self.gram * y))
        return worst


def identity_operator(shape) -> LinearOperator:
    shape = (int(shape),) if np.isscalar(shape) else tuple(shape)
    return LinearOperator(
        forward=lambda w: np.array(w, dtype=float),
        adjoint=lambda y: np.array(y, dtype=float),
        gram=np.ones(shape),
        in_shape=shape,
        out_shape=shape,
    )


def matrix_operator(A) -> LinearOperator:
    """Wrap a dense matrix whose rows are mutually orthogonal."""
    A = np.asarray(A, dtype=float)
    return LinearOperator(
        forward=lambda w: A @ w,
        adjoint=lambda y: A.T @ y,
        gram=np.einsum("ij,ij->i", A, A),
        in_shape=(A.shape[1],),
        out_shape=(A.shape[0],),
    )
