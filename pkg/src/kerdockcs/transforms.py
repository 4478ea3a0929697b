"""Fast orthonormal Walsh-Hadamard (Paley order) and Haar transforms.

All 1D transforms act along the last axis, so a stack of signals (or the
rows of an image) is handled in one call.  ``H_m`` and ``Psi_m`` follow the
Kronecker recursions

    H_{m+1}   = [H_m (x) (1, 1); H_m (x) (1, -1)] / sqrt(2)
    Psi_{m+1} = [Psi_m (x) (1, 1); I_m (x) (1, -1)] / sqrt(2)

with ``H_0 = Psi_0 = 1``.  Haar coefficients are ordered coarse to fine:
index 0 is the dc term and scale ``j`` occupies ``[2**j, 2**(j+1))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_image, log2_length

__all__ = [
    "ScaleDecomposition",
    "fwht_paley",
    "haar_forward",
    "haar_inverse",
    "haar_forward_flat",
    "haar_inverse_flat",
    "hadamard_matrix",
    "haar_matrix",
    "hadamard_haar_blocks",
    "transform_2d",
    "scale_slice",
]

_SQRT2 = np.sqrt(2.0)


def scale_slice(j: int) -> slice:
    """Flat index range of Haar scale ``j`` (0-based)."""
    return slice(1 << j, 2 << j)


def fwht_paley(x) -> np.ndarray:
    """Orthonormal Walsh-Hadamard transform in Paley order along the last axis.

    Each stage splits every block into its even/odd samples and writes the
    normalized sums to the first half and differences to the second half,
    which is exactly one level of the ``H_m`` recursion.  ``H_m`` is
    symmetric and orthogonal, so the transform is its own inverse.
    """
    y = np.array(x, dtype=float)
    n = y.shape[-1]
    m = log2_length(n)
    lead = y.shape[:-1]
    for k in range(m):
        pairs = y.reshape(*lead, 1 << k, n >> (k + 1), 2)
        a, b = pairs[..., 0], pairs[..., 1]
        y = np.stack(((a + b) / _SQRT2, (a - b) / _SQRT2), axis=-2).reshape(*lead, n)
    return y


def haar_forward_flat(x) -> np.ndarray:
    """Haar coefficients ``Psi_m x`` along the last axis as a flat array."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    log2_length(n)
    out = np.empty_like(x)
    approx = x
    while n > 1:
        a, b = approx[..., 0::2], approx[..., 1::2]
        out[..., n // 2 : n] = (a - b) / _SQRT2
        approx = (a + b) / _SQRT2
        n //= 2
    out[..., 0] = approx[..., 0]
    return out


def haar_inverse_flat(w) -> np.ndarray:
    """Inverse of :func:`haar_forward_flat` (``Psi_m^T w``)."""
    w = np.asarray(w, dtype=float)
    n_total = w.shape[-1]
    log2_length(n_total)
    approx = w[..., :1]
    n = 1
    while n < n_total:
        detail = w[..., n : 2 * n]
        nxt = np.empty(w.shape[:-1] + (2 * n,))
        nxt[..., 0::2] = (approx + detail) / _SQRT2
        nxt[..., 1::2] = (approx - detail) / _SQRT2
        approx = nxt
        n *= 2
    return approx.copy()


@dataclass(frozen=True)
class ScaleDecomposition:
    """Haar coefficients split into the dc term and per-scale blocks.

    ``scales[j]`` has length ``2**j``; in the flat layout it sits at 1-based
    positions ``2**j + 1 .. 2**(j+1)``.
    """

    dc: float
    scales: tuple[np.ndarray, ...]

    @property
    def m(self) -> int:
        return len(self.scales)

    @classmethod
    def from_flat(cls, w) -> "ScaleDecomposition":
        w = np.asarray(w, dtype=float)
        m = log2_length(w.shape[-1])
        if w.ndim != 1:
            raise ValueError("ScaleDecomposition holds a single 1D signal")
        return cls(float(w[0]), tuple(w[scale_slice(j)].copy() for j in range(m)))

    def flat(self) -> np.ndarray:
        return np.concatenate([[self.dc], *self.scales])


def haar_forward(x) -> ScaleDecomposition:
    """Haar transform of a 1D signal, returned scale by scale."""
    return ScaleDecomposition.from_flat(haar_forward_flat(x))


def haar_inverse(w) -> np.ndarray:
    """Signal from a :class:`ScaleDecomposition` (or a flat coefficient vector)."""
    if isinstance(w, ScaleDecomposition):
        w = w.flat()
    return haar_inverse_flat(w)


def hadamard_matrix(m: int) -> np.ndarray:
    """Dense ``H_m`` built directly from the Kronecker recursion."""
    H = np.ones((1, 1))
    for _ in range(m):
        H = np.vstack((np.kron(H, [1.0, 1.0]), np.kron(H, [1.0, -1.0]))) / _SQRT2
    return H


def haar_matrix(m: int) -> np.ndarray:
    """Dense ``Psi_m`` built directly from the Kronecker recursion."""
    P = np.ones((1, 1))
    for k in range(m):
        P = np.vstack((np.kron(P, [1.0, 1.0]), np.kron(np.eye(1 << k), [1.0, -1.0]))) / _SQRT2
    return P


def hadamard_haar_blocks(m: int, atol: float = 1e-12) -> list[np.ndarray]:
    """Diagonal blocks of ``H_m Psi_m^T``, verified block-diagonal.

    The product is formed by pushing every column of ``Psi_m^T`` (the Haar
    atoms) through :func:`fwht_paley`.  Returns ``[1, H_0, H_1, ..., H_{m-1}]``
    after checking that every entry off the dyadic blocks is below ``atol``
    and that each block matches the recursively built ``H_{j-1}``.
    """
    if not 0 <= m <= 10:
        raise ValueError("hadamard_haar_blocks is a dense check; need 0 <= m <= 10")
    n = 1 << m
    atoms = haar_inverse_flat(np.eye(n))  # row k is the k-th Haar atom
    G = fwht_paley(atoms).T  # column k is H_m @ atom_k
    bounds = [(0, 1)] + [(1 << j, 2 << j) for j in range(m)]
    mask = np.zeros((n, n), dtype=bool)
    blocks = []
    for lo, hi in bounds:
        mask[lo:hi, lo:hi] = True
        blocks.append(G[lo:hi, lo:hi].copy())
    off = np.abs(G[~mask]).max(initial=0.0)
    if off >= atol:
        raise AssertionError(f"off-block entry {off:.3e} in H_{m} Psi_{m}^T")
    for j, B in enumerate(blocks[1:]):
        err = np.abs(B - hadamard_matrix(j)).max()
        if err >= atol:
            raise AssertionError(f"block {j + 1} differs from H_{j} by {err:.3e}")
    return blocks


_TRANSFORMS = {
    "wht": fwht_paley,
    "haar": haar_forward_flat,
    "haar_inverse": haar_inverse_flat,
}


def transform_2d(X, which: str = "haar") -> np.ndarray:
    """Apply a 1D transform to every row, then every column: ``T X T^T``."""
    try:
        f = _TRANSFORMS[which]
    except KeyError:
        raise ValueError(f"unknown transform {which!r}; choose from {sorted(_TRANSFORMS)}") from None
    X = check_image(X)
    return f(f(X).T).T
