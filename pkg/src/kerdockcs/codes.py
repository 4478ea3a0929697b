"""GF(2) linear algebra and Kerdock-style sign sets.

A sign set is a family of ``2**p`` diagonal +-1 vectors of length ``2**m``,
each of the form ``(-1)**Q(x)`` for a binary quadratic form ``Q``.  The
forms are chosen so that the alternating matrix of every pairwise difference
has maximal rank (``m`` for even ``m``, ``m - 1`` for odd ``m``), which is what
keeps the orthobases ``diag(signs[i]) @ H_m`` mutually incoherent.

Indices are mapped to binary tuples LSB-first: bit ``j`` of the index ``x`` is
the variable ``x_{j+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "BinaryMatrix",
    "QuadraticForm",
    "SignSet",
    "SignSetError",
    "gf2_rank",
    "eval_form_signs",
    "build_sign_set",
    "pairwise_rank",
    "format_sign_set",
]


class SignSetError(RuntimeError):
    """Raised when a sign set with the requested quality cannot be built."""


@dataclass(frozen=True)
class BinaryMatrix:
    """Dense matrix over GF(2), stored as a read-only ``uint8`` array."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.size == 0:
            raise ValueError("BinaryMatrix must be a nonempty 2D array")
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("BinaryMatrix entries must be 0 or 1")
        bits = bits.astype(np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def __add__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        return BinaryMatrix(self.bits ^ other.bits)

    @property
    def T(self) -> "BinaryMatrix":
        return BinaryMatrix(self.bits.T)

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.bits.shape, self.bits.tobytes()))


def _pack_rows(bits: np.ndarray) -> list[int]:
    weights = 1 << np.arange(bits.shape[1], dtype=object)
    return [int(np.dot(row.astype(object), weights)) for row in bits]


def _rank_of_packed(rows: list[int]) -> int:
    rank = 0
    rows = [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def gf2_rank(M) -> int:
    """Rank of a binary matrix over GF(2), by Gaussian elimination."""
    if not isinstance(M, BinaryMatrix):
        M = BinaryMatrix(M)
    return _rank_of_packed(_pack_rows(M.bits))


@dataclass(frozen=True)
class QuadraticForm:
    """``Q(x) = sum_{j<=k} U[j, k] x_j x_k (mod 2)`` with ``U`` upper triangular."""

    U: BinaryMatrix

    def __post_init__(self):
        if not isinstance(self.U, BinaryMatrix):
            object.__setattr__(self, "U", BinaryMatrix(self.U))
        if self.U.rows != self.U.cols:
            raise ValueError("quadratic form matrix must be square")
        if np.tril(self.U.bits, -1).any():
            raise ValueError("quadratic form matrix must be upper triangular")

    @classmethod
    def zero(cls, m: int) -> "QuadraticForm":
        return cls(BinaryMatrix(np.zeros((m, m), dtype=np.uint8)))

    @property
    def m(self) -> int:
        return self.U.rows

    @property
    def bilinear(self) -> BinaryMatrix:
        """Alternating matrix ``U + U^T``; its diagonal is always zero."""
        return self.U + self.U.T

    def __call__(self, x: int) -> int:
        bits = np.array([(x >> j) & 1 for j in range(self.m)], dtype=np.int64)
        return int(bits @ self.U.bits.astype(np.int64) @ bits) & 1


def eval_form_signs(Q: QuadraticForm) -> np.ndarray:
    """Return the vector ``(-1)**Q(x)`` for ``x = 0, ..., 2**m - 1``."""
    m = Q.m
    idx = np.arange(1 << m)
    bits = ((idx[:, None] >> np.arange(m)) & 1).astype(np.int64)
    parity = np.einsum("xj,jk,xk->x", bits, Q.U.bits.astype(np.int64), bits) & 1
    return 1.0 - 2.0 * parity


def pairwise_rank(Qa: QuadraticForm, Qb: QuadraticForm) -> int:
    """GF(2) rank of the alternating matrix of ``Qa + Qb``."""
    return gf2_rank((Qa.U + Qb.U) + (Qa.U + Qb.U).T)


# -- arithmetic in GF(2**n), polynomial basis, elements as ints -------------


@lru_cache(maxsize=None)
def _irreducible(n: int) -> int:
    """Smallest irreducible polynomial of degree ``n`` over GF(2)."""
    for poly in range((1 << n) | 1, 1 << (n + 1), 2):
        if all(_polymod(poly, d) for d in range(2, 1 << (n // 2 + 1))):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _polymod(a: int, b: int) -> int:
    while a.bit_length() >= b.bit_length():
        a ^= b << (a.bit_length() - b.bit_length())
    return a


def _gf_mul(a: int, b: int, n: int, poly: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= poly
    return r


def _gf_trace(a: int, n: int, poly: int) -> int:
    t, x = 0, a
    for _ in range(n):
        t ^= x
        x = _gf_mul(x, x, n, poly)
    return t  # lies in GF(2), so 0 or 1


def _kerdock_form(u: int, m: int):
    """Boolean quadratic function indexed by ``u`` as a callable on ints.

    Odd ``m``: ``Q_u(x) = Tr(u x^3)`` on GF(2**m); every nonzero ``u`` gives an
    alternating form of rank ``m - 1``.
    Even ``m`` (``n = m - 1`` odd): on ``GF(2**n) x GF(2)``,
    ``Q_u(x, xi) = xi Tr(u x) + sum_{i=1}^{(n-1)/2} Tr((u x)^{1 + 2^i})``; all
    pairwise differences are nonsingular.
    """
    if m % 2:
        n, poly = m, _irreducible(m)

        def Q(v):
            x2 = _gf_mul(v, v, n, poly)
            return _gf_trace(_gf_mul(u, _gf_mul(x2, v, n, poly), n, poly), n, poly)

        return Q

    n = m - 1
    poly = _irreducible(n)
    mask = (1 << n) - 1

    def Q(v):
        x, xi = v & mask, v >> n
        y = _gf_mul(u, x, n, poly)
        s = xi & _gf_trace(y, n, poly)
        yp = y
        for _ in range((n - 1) // 2):
            yp = _gf_mul(yp, yp, n, poly)
            s ^= _gf_trace(_gf_mul(y, yp, n, poly), n, poly)
        return s

    return Q


def _form_matrix(Q, m: int) -> np.ndarray:
    U = np.zeros((m, m), dtype=np.uint8)
    for j in range(m):
        U[j, j] = Q(1 << j)
        for k in range(j + 1, m):
            U[j, k] = Q((1 << j) | (1 << k)) ^ Q(1 << j) ^ Q(1 << k)
    return U


@dataclass(frozen=True)
class SignSet:
    """``2**p`` quadratic forms on ``m`` variables and their sign vectors."""

    m: int
    p: int
    forms: tuple[QuadraticForm, ...]
    signs: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.forms)

    @property
    def rank_threshold(self) -> int:
        return self.m if self.m % 2 == 0 else self.m - 1

    def ranks(self) -> np.ndarray:
        """Matrix of pairwise bilinear ranks (diagonal is zero)."""
        R = np.zeros((self.size, self.size), dtype=int)
        packed = [_pack_rows(f.bilinear.bits) for f in self.forms]
        for i in range(self.size):
            for j in range(i):
                r = _rank_of_packed([a ^ b for a, b in zip(packed[i], packed[j])])
                R[i, j] = R[j, i] = r
        return R


@lru_cache(maxsize=None)
def build_sign_set(m: int, p: int) -> SignSet:
    """Deterministic set of ``2**p`` sign vectors of length ``2**m``.

    The forms come from a Kerdock set over GF(2**m) (odd ``m``) or
    GF(2**(m-1)) x GF(2) (even ``m``), taken in increasing order of their
    field index, so ``forms[0]`` is the zero form.  Every pairwise rank is
    checked before the set is returned.

    Raises
    ------
    ValueError
        If ``p`` is outside ``0 <= p <= m - 1``.
    SignSetError
        If the verification pass finds a pair below the rank threshold.
    """
    m, p = int(m), int(p)
    if m < 1 or p < 0 or p > m - 1:
        raise ValueError(f"need 0 <= p <= m - 1, got m={m}, p={p}")

    forms = tuple(
        QuadraticForm(BinaryMatrix(_form_matrix(_kerdock_form(u, m), m)))
        for u in range(1 << p)
    )
    signs = np.stack([eval_form_signs(f) for f in forms])
    signs.setflags(write=False)
    out = SignSet(m=m, p=p, forms=forms, signs=signs)

    R = out.ranks()
    off = ~np.eye(out.size, dtype=bool)
    if out.size > 1 and R[off].min() < out.rank_threshold:
        raise SignSetError(
            f"sign set (m={m}, p={p}) has a pairwise rank {R[off].min()} "
            f"below {out.rank_threshold}"
        )
    return out


def format_sign_set(S: SignSet) -> str:
    """Debug dump: one line of ``+``/``-`` characters per sign vector."""
    return "\n".join("".join("+" if s > 0 else "-" for s in row) for row in S.signs)
