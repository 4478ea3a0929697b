"""Independent reference constructions used by the tests.

Nothing here calls the fast transforms or the solver under test.
"""

import itertools

import numpy as np
from scipy.optimize import linprog


def hadamard_paley(m):
    """``H_m`` entrywise: bit ``m-1-i`` of the row pairs with bit ``i`` of the column."""
    n = 1 << m
    r = np.arange(n)[:, None]
    c = np.arange(n)[None, :]
    parity = np.zeros((n, n), dtype=int)
    for i in range(m):
        parity ^= ((r >> (m - 1 - i)) & 1) & ((c >> i) & 1)
    return (1 - 2 * parity) / np.sqrt(n)


def haar_atoms(m):
    """``Psi_m`` row by row: dc, then box-difference atoms coarse to fine."""
    n = 1 << m
    rows = [np.full(n, 2.0 ** (-m / 2))]
    for j in range(m):
        width = n >> j
        for k in range(1 << j):
            a = np.zeros(n)
            a[k * width : k * width + width // 2] = 1.0
            a[k * width + width // 2 : (k + 1) * width] = -1.0
            rows.append(a * 2.0 ** ((j - m) / 2))
    return np.array(rows)


def bp_vertex_enumeration(A, b):
    """Basis pursuit by brute force over basic solutions.

    ``A`` has full row rank ``M``; the l1 minimum is attained at a basic
    solution supported on ``M`` linearly independent columns.
    """
    M, n = A.shape
    best, best_w = np.inf, None
    for S in itertools.combinations(range(n), M):
        sub = A[:, S]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        wS = np.linalg.solve(sub, b)
        obj = np.abs(wS).sum()
        if obj < best - 1e-12:
            best = obj
            best_w = np.zeros(n)
            best_w[list(S)] = wS
    return best, best_w


def bp_linprog(A, b):
    """Basis pursuit as an LP in split variables ``w = u - v``, ``u, v >= 0``."""
    M, n = A.shape
    res = linprog(np.ones(2 * n), A_eq=np.hstack([A, -A]), b_eq=b, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.x[:n] - res.x[n:]


def orthogonal_rows(rng, M, n):
    """Random ``M x n`` matrix with mutually orthogonal rows of random length."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, M)))
    return rng.uniform(0.5, 2.0, size=(M, 1)) * Q.T
