"""Input checks shared by the transforms, operators and estimators."""

from __future__ import annotations

import numpy as np


def log2_length(n: int) -> int:
    """Return ``m`` with ``n == 2**m``, or raise ``ValueError``."""
    n = int(n)
    if n < 1 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return n.bit_length() - 1


def check_signal(x, length: int | None = None) -> np.ndarray:
    """Finite float vector whose length is a power of two (or ``length``)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a 1D signal, got shape {x.shape}")
    if length is not None and x.shape[0] != length:
        raise ValueError(f"expected length {length}, got {x.shape[0]}")
    log2_length(x.shape[0])
    if not np.isfinite(x).all():
        raise ValueError("signal contains non-finite values")
    return x


def check_image(X, side: int | None = None) -> np.ndarray:
    """Finite square float image with power-of-two side (or side ``side``)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square image, got shape {X.shape}")
    if side is not None and X.shape[0] != side:
        raise ValueError(f"expected side {side}, got {X.shape[0]}")
    log2_length(X.shape[0])
    if not np.isfinite(X).all():
        raise ValueError("image contains non-finite values")
    return X
