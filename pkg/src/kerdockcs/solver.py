"""Equality-constrained basis pursuit, ``min ||w||_1 s.t. A w = b``.

The solver is Douglas-Rachford splitting between soft-thresholding and the
projection onto ``{w : A w = b}``.  Because every operator in this package
has a diagonal ``A A^T``, that projection is exact and costs one forward and
one adjoint application.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields

import numpy as np

from .operator import LinearOperator, OperatorError

__all__ = [
    "SolverConfig",
    "ReconReport",
    "soft_threshold",
    "affine_project",
    "min_norm_solution",
    "solve_bp",
    "snr",
]

logger = logging.getLogger(__name__)

_PREFLIGHT_TOL = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    """Douglas-Rachford settings.

    ``shrink`` multiplies the automatic threshold ``median(|A^T (b / gram)|)``.
    ``tolerance`` bounds both the relative residual ``||A w - b|| / ||b||`` and
    the relative fixed-point gap between the prox and projection steps.
    """

    max_iterations: int = 2000
    tolerance: float = 1e-6
    relaxation: float = 1.0
    shrink: float = 1.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 0 < self.relaxation < 2:
            raise ValueError("relaxation must lie in (0, 2)")
        if not self.shrink > 0:
            raise ValueError("shrink must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown solver keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class ReconReport:
    solution: np.ndarray
    iterations: int
    residual: float
    objective: float
    converged: bool
    snr: float | None = None


def soft_threshold(w, t: float) -> np.ndarray:
    """Proximal map of ``t ||.||_1``: ``sign(w) max(|w| - t, 0)``."""
    if not t > 0:
        raise ValueError("threshold must be positive")
    w = np.asarray(w, dtype=float)
    return np.sign(w) * np.maximum(np.abs(w) - t, 0.0)


def affine_project(w, A: LinearOperator, b) -> np.ndarray:
    """Euclidean projection of ``w`` onto ``{v : A v = b}``."""
    w = np.asarray(w, dtype=float)
    return w + A.adjoint((b - A.forward(w)) / A.gram)


def min_norm_solution(A: LinearOperator, b) -> np.ndarray:
    """Minimum-energy feasible point ``A^T (b / gram)``."""
    return A.adjoint(np.asarray(b, dtype=float) / A.gram)


def _relative_residual(A, w, b, bnorm):
    return float(np.linalg.norm(A.forward(w) - b) / bnorm)


def _preflight(A: LinearOperator):
    dot = A.dot_test(np.random.default_rng(12345))
    if dot > _PREFLIGHT_TOL:
        raise OperatorError(f"adjoint mismatch {dot:.3e} exceeds {_PREFLIGHT_TOL}")
    gram = A.gram_test(np.random.default_rng(54321))
    if gram > _PREFLIGHT_TOL:
        raise OperatorError(f"A A^T differs from diag(gram) by {gram:.3e}")


def solve_bp(A: LinearOperator, b, cfg: SolverConfig | None = None, truth=None) -> ReconReport:
    """Solve ``min ||w||_1`` subject to ``A w = b``.

    Starts from ``z = 0`` and iterates::

        w = P(z);  v = soft(2 w - z, t);  z += relaxation * (v - w)

    where ``P`` is :func:`affine_project`.  Returns the projected iterate, so
    the result is always feasible to rounding error.  When ``truth`` is given
    the report carries ``snr(truth, solution)``.

    Raises
    ------
    OperatorError
        If ``A`` fails the preflight adjoint or Gram check.
    """
    cfg = SolverConfig() if cfg is None else cfg
    b = np.asarray(b, dtype=float)
    if b.shape != A.out_shape:
        raise ValueError(f"expected measurements of shape {A.out_shape}, got {b.shape}")
    _preflight(A)

    def report(w, it, converged):
        r = 0.0 if bnorm == 0 else _relative_residual(A, w, b, bnorm)
        s = None if truth is None else snr(truth, w)
        return ReconReport(w, it, r, float(np.abs(w).sum()), converged, s)

    bnorm = float(np.linalg.norm(b))
    if bnorm == 0:
        return report(np.zeros(A.in_shape), 0, True)

    w_ls = min_norm_solution(A, b)
    if A.n_out == A.n_in:
        # diagonal Gram and square A: the feasible set is a single point
        return report(w_ls, 1, True)

    mags = np.abs(w_ls)
    nonzero = mags[mags > 0]
    t = cfg.shrink * float(np.median(nonzero if np.median(mags) == 0 else mags))

    z = np.zeros(A.in_shape)
    w = w_ls
    converged = False
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        w = affine_project(z, A, b)
        v = soft_threshold(2 * w - z, t)
        gap = np.linalg.norm(v - w) / max(np.linalg.norm(w), np.finfo(float).tiny)
        z = z + cfg.relaxation * (v - w)
        if gap <= cfg.tolerance and _relative_residual(A, w, b, bnorm) <= cfg.tolerance:
            converged = True
            break
    if not converged:
        logger.warning("basis pursuit stopped after %d iterations (gap %.3e)", it, gap)

    if converged:
        w = _polish(A, b, w, v, bnorm)
    if np.abs(w).sum() > np.abs(w_ls).sum():
        w = w_ls
    return report(w, it, converged)


def _columns(A: LinearOperator, support) -> np.ndarray:
    cols = np.empty((A.n_out, len(support)))
    e = np.zeros(A.n_in)
    for k, i in enumerate(support):
        e[i] = 1.0
        cols[:, k] = A.forward(e.reshape(A.in_shape)).ravel()
        e[i] = 0.0
    return cols


def _polish(A: LinearOperator, b, w, v, bnorm, max_support: int = 512):
    """Move a converged iterate to a basic solution on the same l1 level.

    Refits by least squares on the support of the prox iterate ``v``, then
    walks along null directions of the support columns, dropping one
    coordinate per step, until the columns are independent.  Every candidate
    must stay feasible and no worse in l1 than ``w``; otherwise ``w`` is kept.
    Only attempted for supports up to ``min(M, max_support)``.
    """
    support = np.flatnonzero(v)
    if support.size == 0 or support.size > min(A.n_out, max_support):
        return w
    cols = _columns(A, support)
    coef = np.linalg.lstsq(cols, b.ravel(), rcond=None)[0]

    while support.size > 1:
        _, sv, Vt = np.linalg.svd(cols, full_matrices=True)
        rank = int((sv > sv[0] * 1e-10).sum())
        if rank == support.size:
            break
        d = Vt[-1]
        slope = np.sign(coef) @ d
        if slope > 0:
            d, slope = -d, -slope
        nz = np.abs(d) > 1e-12
        steps = -coef[nz] / d[nz]
        # flat l1 along d: either direction; descent: forward steps only
        allowed = steps > 0 if slope < -1e-12 else np.ones_like(steps, dtype=bool)
        if not allowed.any():
            break
        k = np.flatnonzero(nz)[allowed][np.argmin(np.abs(steps[allowed]))]
        coef = coef + (-coef[k] / d[k]) * d
        keep = np.arange(support.size) != k
        support, cols, coef = support[keep], cols[:, keep], coef[keep]
        coef = np.linalg.lstsq(cols, b.ravel(), rcond=None)[0]

    cand = np.zeros(A.n_in)
    cand[support] = coef
    cand = cand.reshape(A.in_shape)
    if _relative_residual(A, cand, b, bnorm) > _PREFLIGHT_TOL:
        return w
    if np.abs(cand).sum() > np.abs(w).sum() + 1e-9 * max(np.abs(w).sum(), 1.0):
        return w
    return cand


def snr(w, w_hat) -> float:
    """``10 log10(||w|| / ||w_hat - w||)`` in dB, unsquared norms.

    Returns ``math.inf`` for an exact reconstruction.
    """
    w = np.asarray(w, dtype=float)
    w_hat = np.asarray(w_hat, dtype=float)
    ref = np.linalg.norm(w)
    if ref == 0:
        raise ValueError("ground truth must be nonzero")
    err = np.linalg.norm(w_hat - w)
    if err == 0:
        return math.inf
    return float(10.0 * np.log10(ref / err))
