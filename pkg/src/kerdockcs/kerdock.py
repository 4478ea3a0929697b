"""The Kerdock transform ``K^{m,p} = [D^1 H_m | ... | D^{2^p} H_m]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import SignSet, build_sign_set
from .transforms import fwht_paley, hadamard_matrix

__all__ = [
    "KerdockParams",
    "kerdock_forward",
    "kerdock_adjoint",
    "kerdock_forward_2d",
    "kerdock_adjoint_2d",
    "kerdock_matrix",
    "frame_gram_check",
]


@dataclass(frozen=True)
class KerdockParams:
    """Shape parameters and sign set of one Kerdock matrix.

    The matrix is ``2**m x 2**(m+p)``; its compression factor is ``2**p``.
    """

    m: int
    p: int
    signset: SignSet

    def __post_init__(self):
        if self.m < 0 or self.p < 0:
            raise ValueError(f"need m, p >= 0, got m={self.m}, p={self.p}")
        if self.signset.signs.shape != (1 << self.p, 1 << self.m):
            raise ValueError(
                f"sign set shape {self.signset.signs.shape} does not match "
                f"(2**p, 2**m) = {(1 << self.p, 1 << self.m)}"
            )

    @classmethod
    def build(cls, m: int, p: int) -> "KerdockParams":
        return cls(m, p, build_sign_set(m, p))

    @property
    def n_rows(self) -> int:
        return 1 << self.m

    @property
    def n_cols(self) -> int:
        return 1 << (self.m + self.p)

    @property
    def signs(self) -> np.ndarray:
        return self.signset.signs


def kerdock_forward(x, K: KerdockParams) -> np.ndarray:
    """``K x`` along the last axis: sum of sign-flipped WHTs of the subvectors.

    Costs ``O(m 2**(m+p))``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != K.n_cols:
        raise ValueError(f"expected last axis of length {K.n_cols}, got {x.shape[-1]}")
    parts = x.reshape(*x.shape[:-1], 1 << K.p, K.n_rows)
    return np.einsum("...in,in->...n", fwht_paley(parts), K.signs)


def kerdock_adjoint(y, K: KerdockParams) -> np.ndarray:
    """``K^T y`` along the last axis: stacked ``H_m D^i y``."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != K.n_rows:
        raise ValueError(f"expected last axis of length {K.n_rows}, got {y.shape[-1]}")
    flipped = y[..., None, :] * K.signs
    return fwht_paley(flipped).reshape(*y.shape[:-1], K.n_cols)


def kerdock_forward_2d(X, K: KerdockParams) -> np.ndarray:
    """``K X K^T``: columns first, then rows."""
    X = np.asarray(X, dtype=float)
    if X.shape != (K.n_cols, K.n_cols):
        raise ValueError(f"expected a {K.n_cols}x{K.n_cols} image, got {X.shape}")
    cols = kerdock_forward(X.T, K).T
    return kerdock_forward(cols, K)


def kerdock_adjoint_2d(Y, K: KerdockParams) -> np.ndarray:
    """``K^T Y K``."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (K.n_rows, K.n_rows):
        raise ValueError(f"expected a {K.n_rows}x{K.n_rows} array, got {Y.shape}")
    return kerdock_adjoint(kerdock_adjoint(Y, K).T, K).T


def kerdock_matrix(K: KerdockParams) -> np.ndarray:
    """Dense ``K^{m,p}`` assembled from ``D^i`` and the recursive ``H_m``."""
    H = hadamard_matrix(K.m)
    return np.hstack([s[:, None] * H for s in K.signs])


def frame_gram_check(K: KerdockParams) -> float:
    """Return ``max |K K^T - 2**p I|`` computed with the fast operators."""
    if K.m > 8:
        raise ValueError("frame_gram_check is a dense check; need m <= 8")
    KKt = kerdock_forward(kerdock_adjoint(np.eye(K.n_rows), K), K)
    return float(np.abs(KKt - (1 << K.p) * np.eye(K.n_rows)).max())
