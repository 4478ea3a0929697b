"""Deterministic multi-scale sampling and the two WHT baselines.

A sampling strategy ``P`` has one entry per Haar scale slot: ``P[j-1] = 0``
samples scale ``s = j - 1`` directly, ``P[j-1] = p > 0`` measures it with a
``2**(s-p) x 2**s`` Kerdock block ``K^{s-p,p}``.  The dc coefficient is always
kept.  In the Haar domain the whole operator is block diagonal over scales::

    B = diag(1, B_0, ..., B_{m-1}),   B_s = I or K^{s-p,p}

so ``sample(x) = B Psi_m x`` and ``B B^T`` is diagonal (``1`` or ``2**p``).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from ._validation import check_image, log2_length
from .kerdock import KerdockParams, kerdock_adjoint, kerdock_forward
from .operator import LinearOperator
from .transforms import fwht_paley, haar_forward_flat, haar_inverse_flat, scale_slice

__all__ = [
    "InvalidStrategy",
    "SamplingStrategy",
    "LayoutEntry",
    "MeasurementLayout",
    "MultiscaleOperator",
    "parse_strategy",
    "strategy_violations",
    "validate_strategy",
    "sample_multiscale",
    "adjoint_multiscale",
    "sample_multiscale_2d",
    "adjoint_multiscale_2d",
    "gram_diagonal",
    "LowFrequencyWHT",
    "RandomWHT",
    "baseline_wht_lowfreq",
    "baseline_wht_random",
    "apply_separable",
]


class InvalidStrategy(ValueError):
    """A sampling strategy breaks one or more per-scale constraints."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid sampling strategy: " + "; ".join(self.violations))


@dataclass(frozen=True)
class SamplingStrategy:
    m: int
    P: tuple[int, ...]

    def __str__(self):
        return ",".join(map(str, self.P))

    def power(self, s: int) -> int:
        """Subsampling power applied to Haar scale ``s``."""
        return self.P[s]


def parse_strategy(text: str) -> tuple[int, ...]:
    """Parse ``"0,0,1,2"`` into a tuple of ints."""
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok != "")
    except ValueError:
        raise InvalidStrategy([f"cannot parse strategy {text!r}"]) from None


def strategy_violations(m: int, P) -> list[str]:
    """Every constraint a strategy breaks, one message per problem."""
    if isinstance(P, str):
        P = parse_strategy(P)
    P = tuple(P)
    problems = []
    if len(P) != m:
        problems.append(f"strategy has {len(P)} entries, expected m={m}")
    for s, p in enumerate(P):
        if p < 0:
            problems.append(f"scale {s}: negative power {p}")
        elif p > 0 and s < 2 * p + 1:
            problems.append(f"scale {s}: p={p} needs s >= 2p+1 = {2 * p + 1}")
    return problems


def validate_strategy(m: int, P) -> SamplingStrategy:
    """Check ``P`` against ``m`` and return a :class:`SamplingStrategy`.

    Raises :class:`InvalidStrategy` listing every violated constraint.
    """
    if isinstance(P, str):
        P = parse_strategy(P)
    problems = strategy_violations(m, P)
    if problems:
        raise InvalidStrategy(problems)
    return SamplingStrategy(int(m), tuple(int(p) for p in P))


@dataclass(frozen=True)
class LayoutEntry:
    scale: int  # -1 for the dc coefficient
    count: int
    offset: int
    gram: int
    p: int = 0


@dataclass(frozen=True)
class MeasurementLayout:
    entries: tuple[LayoutEntry, ...]

    @classmethod
    def from_strategy(cls, strategy: SamplingStrategy) -> "MeasurementLayout":
        entries = [LayoutEntry(scale=-1, count=1, offset=0, gram=1)]
        offset = 1
        for s, p in enumerate(strategy.P):
            count = 1 << (s - p)
            entries.append(LayoutEntry(scale=s, count=count, offset=offset, gram=1 << p, p=p))
            offset += count
        return cls(tuple(entries))

    @property
    def total(self) -> int:
        last = self.entries[-1]
        return last.offset + last.count

    def block(self, scale: int) -> slice:
        e = self.entries[scale + 1]
        return slice(e.offset, e.offset + e.count)

    def gram_diagonal(self) -> np.ndarray:
        return np.concatenate([np.full(e.count, float(e.gram)) for e in self.entries])

    def to_json(self, **kwargs) -> str:
        return json.dumps([asdict(e) for e in self.entries], **kwargs)


class MultiscaleOperator:
    """The multi-scale Kerdock sampling operator for signals of length ``2**m``.

    Per-scale sign sets are built independently for each ``(s - p, p)``.
    1D methods act along the last axis; the ``*_2d`` methods apply the
    operator separably to columns, then rows.
    """

    def __init__(self, strategy):
        if not isinstance(strategy, SamplingStrategy):
            raise TypeError("use MultiscaleOperator.from_strategy for raw inputs")
        self.strategy = strategy
        self.layout = MeasurementLayout.from_strategy(strategy)
        self.blocks = {
            s: KerdockParams.build(s - p, p) for s, p in enumerate(strategy.P) if p > 0
        }

    @classmethod
    def from_strategy(cls, m: int, P) -> "MultiscaleOperator":
        return cls(validate_strategy(m, P))

    @property
    def m(self) -> int:
        return self.strategy.m

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def n_measurements(self) -> int:
        return self.layout.total

    def __repr__(self):
        return f"MultiscaleOperator(m={self.m}, P=({self.strategy}), M={self.n_measurements})"

    # Haar-domain block operator B
    def forward_coeffs(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if w.shape[-1] != self.n:
            raise ValueError(f"expected last axis of length {self.n}, got {w.shape[-1]}")
        y = np.empty(w.shape[:-1] + (self.n_measurements,))
        y[..., 0] = w[..., 0]
        for s in range(self.m):
            src, dst = w[..., scale_slice(s)], self.layout.block(s)
            K = self.blocks.get(s)
            y[..., dst] = src if K is None else kerdock_forward(src, K)
        return y

    def adjoint_coeffs(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.n_measurements:
            raise ValueError(
                f"expected last axis of length {self.n_measurements}, got {y.shape[-1]}"
            )
        w = np.empty(y.shape[:-1] + (self.n,))
        w[..., 0] = y[..., 0]
        for s in range(self.m):
            src = y[..., self.layout.block(s)]
            K = self.blocks.get(s)
            w[..., scale_slice(s)] = src if K is None else kerdock_adjoint(src, K)
        return w

    def forward(self, x) -> np.ndarray:
        return self.forward_coeffs(haar_forward_flat(x))

    def adjoint(self, y) -> np.ndarray:
        return haar_inverse_flat(self.adjoint_coeffs(y))

    def forward_coeffs_2d(self, W) -> np.ndarray:
        return apply_separable(self.forward_coeffs, W)

    def adjoint_coeffs_2d(self, Y) -> np.ndarray:
        return apply_separable(self.adjoint_coeffs, Y)

    def gram_diagonal(self) -> np.ndarray:
        return self.layout.gram_diagonal()

    def dense(self) -> np.ndarray:
        """Dense ``B`` (Haar domain), for checks at small sizes."""
        return self.forward_coeffs(np.eye(self.n)).T

    def linear_operator(self, ndim: int = 2) -> LinearOperator:
        """Haar-coefficient-domain operator for :func:`~kerdockcs.solver.solve_bp`."""
        g = self.gram_diagonal()
        if ndim == 1:
            return LinearOperator(
                self.forward_coeffs, self.adjoint_coeffs, g, (self.n,), (self.n_measurements,)
            )
        return LinearOperator(
            self.forward_coeffs_2d,
            self.adjoint_coeffs_2d,
            np.outer(g, g),
            (self.n, self.n),
            (self.n_measurements, self.n_measurements),
        )


def apply_separable(f, X) -> np.ndarray:
    """Apply a last-axis operator to the columns of ``X``, then to its rows."""
    X = np.asarray(X, dtype=float)
    return f(f(X.T).T)


def sample_multiscale(x, op: MultiscaleOperator) -> np.ndarray:
    """Measurements ``B Psi_m x`` of a 1D signal (dc first, coarse to fine)."""
    return op.forward(x)


def adjoint_multiscale(y, op: MultiscaleOperator) -> np.ndarray:
    """``Psi_m^T B^T y``."""
    return op.adjoint(y)


def sample_multiscale_2d(X, op: MultiscaleOperator) -> np.ndarray:
    """``K^P X (K^P)^T`` for a ``2**m`` square image."""
    X = check_image(X, op.n)
    return apply_separable(op.forward, X)


def adjoint_multiscale_2d(Y, op: MultiscaleOperator) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (op.n_measurements, op.n_measurements):
        raise ValueError(f"expected shape {(op.n_measurements,) * 2}, got {Y.shape}")
    return apply_separable(op.adjoint, Y)


def gram_diagonal(op: MultiscaleOperator) -> np.ndarray:
    """Diagonal of ``B B^T``: 1 on direct scales, ``2**p`` on Kerdock scales."""
    return op.gram_diagonal()


class LowFrequencyWHT:
    """Keep the leading ``k x k`` block of the 2D Paley-ordered WHT."""

    def __init__(self, side: int, k: int):
        log2_length(side)
        if not 1 <= k <= side:
            raise ValueError(f"need 1 <= k <= side={side}, got k={k}")
        self.side, self.k = int(side), int(k)

    @property
    def n_measurements(self) -> int:
        return self.k * self.k

    def forward(self, X) -> np.ndarray:
        X = check_image(X, self.side)
        return apply_separable(fwht_paley, X)[: self.k, : self.k]

    def adjoint(self, Y) -> np.ndarray:
        Y = np.asarray(Y, dtype=float)
        if Y.shape != (self.k, self.k):
            raise ValueError(f"expected shape {(self.k, self.k)}, got {Y.shape}")
        full = np.zeros((self.side, self.side))
        full[: self.k, : self.k] = Y
        return apply_separable(fwht_paley, full)

    def linear_operator(self) -> LinearOperator:
        """Operator on 2D Haar coefficients (image = ``Psi^T W Psi``)."""
        return LinearOperator(
            lambda W: self.forward(apply_separable(haar_inverse_flat, W)),
            lambda Y: apply_separable(haar_forward_flat, self.adjoint(Y)),
            np.ones((self.k, self.k)),
            (self.side, self.side),
            (self.k, self.k),
        )


class RandomWHT:
    """A seeded uniformly random subset of ``M`` 2D WHT coefficients.

    Indices come from ``numpy.random.default_rng(seed).permutation`` (PCG64)
    and are stored sorted in row-major flat order.
    """

    def __init__(self, side: int, M: int, seed: int = 0):
        log2_length(side)
        if not 1 <= M <= side * side:
            raise ValueError(f"need 1 <= M <= side**2={side * side}, got M={M}")
        self.side, self.M, self.seed = int(side), int(M), int(seed)
        perm = np.random.default_rng(self.seed).permutation(self.side * self.side)
        self.indices = np.sort(perm[: self.M])
        self.indices.setflags(write=False)

    @property
    def n_measurements(self) -> int:
        return self.M

    def forward(self, X) -> np.ndarray:
        X = check_image(X, self.side)
        return apply_separable(fwht_paley, X).ravel()[self.indices]

    def adjoint(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.M,):
            raise ValueError(f"expected shape {(self.M,)}, got {y.shape}")
        full = np.zeros(self.side * self.side)
        full[self.indices] = y
        return apply_separable(fwht_paley, full.reshape(self.side, self.side))

    def linear_operator(self) -> LinearOperator:
        return LinearOperator(
            lambda W: self.forward(apply_separable(haar_inverse_flat, W)),
            lambda y: apply_separable(haar_forward_flat, self.adjoint(y)),
            np.ones(self.M),
            (self.side, self.side),
            (self.M,),
        )


def baseline_wht_lowfreq(X, k: int) -> np.ndarray:
    """Leading ``k x k`` block of the 2D WHT of ``X``."""
    X = check_image(X)
    return LowFrequencyWHT(X.shape[0], k).forward(X)


def baseline_wht_random(X, M: int, seed: int = 0) -> np.ndarray:
    """``M`` seeded random 2D WHT coefficients of ``X``."""
    X = check_image(X)
    return RandomWHT(X.shape[0], M, seed).forward(X)
