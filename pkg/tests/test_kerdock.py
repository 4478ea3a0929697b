import numpy as np
import pytest

from kerdockcs.codes import QuadraticForm, SignSet, build_sign_set
from kerdockcs.kerdock import (
    KerdockParams,
    frame_gram_check,
    kerdock_adjoint,
    kerdock_adjoint_2d,
    kerdock_forward,
    kerdock_forward_2d,
    kerdock_matrix,
)
from kerdockcs.transforms import fwht_paley, haar_forward_flat, haar_inverse_flat, scale_slice
from oracles import hadamard_paley


def _all_ones(m, p):
    forms = (QuadraticForm.zero(m),) * (1 << p)
    return KerdockParams(m, p, SignSet(m, p, forms, np.ones((1 << p, 1 << m))))


def dense_kerdock(K):
    """Dense K^{m,p} from the sign vectors and the entrywise Hadamard oracle."""
    H = hadamard_paley(K.m)
    return np.hstack([np.diag(s) @ H for s in K.signs])


def test_all_ones_signs():
    np.testing.assert_allclose(kerdock_forward([1, 0, 1, 0], _all_ones(1, 1)), [np.sqrt(2)] * 2)


def test_single_subvector(rng):
    K = KerdockParams.build(4, 2)
    x = np.zeros(64)
    x[:16] = rng.standard_normal(16)
    np.testing.assert_allclose(kerdock_forward(x, K), fwht_paley(x[:16]), atol=1e-14)


def test_forward_matches_dense_m2_p1(rng):
    K = KerdockParams.build(2, 1)
    x = rng.standard_normal(8)
    D = dense_kerdock(K)
    assert D.shape == (4, 8)
    np.testing.assert_allclose(kerdock_forward(x, K), D @ x, atol=1e-14)
    np.testing.assert_allclose(kerdock_matrix(K), D, atol=1e-14)


def test_adjoint_matches_dense_transpose(rng):
    K = KerdockParams.build(2, 1)
    y = rng.standard_normal(4)
    np.testing.assert_allclose(kerdock_adjoint(y, K), dense_kerdock(K).T @ y, atol=1e-14)


def test_adjoint_of_zero():
    K = KerdockParams.build(3, 2)
    np.testing.assert_array_equal(kerdock_adjoint(np.zeros(8), K), 0)


@pytest.mark.parametrize("m,p", [(1, 0), (2, 1), (3, 2), (5, 3), (6, 5), (8, 7)])
def test_dot_test(rng, m, p):
    K = KerdockParams.build(m, p)
    for _ in range(100):
        x, y = rng.standard_normal(K.n_cols), rng.standard_normal(K.n_rows)
        lhs, rhs = kerdock_forward(x, K) @ y, x @ kerdock_adjoint(y, K)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1)


def test_length_mismatch():
    K = KerdockParams.build(3, 1)
    with pytest.raises(ValueError):
        kerdock_forward(np.ones(8), K)
    with pytest.raises(ValueError):
        kerdock_adjoint(np.ones(16), K)


def test_params_validate():
    with pytest.raises(ValueError):
        KerdockParams(3, 1, build_sign_set(3, 2))
    with pytest.raises(ValueError):
        KerdockParams.build(3, 3)
    with pytest.raises(ValueError):
        KerdockParams(2, -1, build_sign_set(2, 1))


def test_frame_single_basis():
    K = KerdockParams.build(3, 0)
    assert frame_gram_check(K) < 1e-12
    D = dense_kerdock(K)
    np.testing.assert_allclose(D @ D.T, np.eye(8), atol=1e-12)


def test_frame_m4_p2():
    K = KerdockParams.build(4, 2)
    D = dense_kerdock(K)
    np.testing.assert_allclose(D @ D.T, 4 * np.eye(16), atol=1e-12)
    assert frame_gram_check(K) < 1e-12


def test_frame_check_refuses_large():
    with pytest.raises(ValueError):
        frame_gram_check(KerdockParams.build(9, 1))


def test_2d_rank_one(rng):
    K = KerdockParams.build(3, 1)
    x, a = rng.standard_normal((2, 16))
    np.testing.assert_allclose(
        kerdock_forward_2d(np.outer(x, a), K),
        np.outer(kerdock_forward(x, K), kerdock_forward(a, K)),
        atol=1e-12,
    )


def test_2d_dense(rng):
    K = KerdockParams.build(2, 1)
    X = rng.standard_normal((8, 8))
    D = dense_kerdock(K)
    np.testing.assert_allclose(kerdock_forward_2d(X, K), D @ X @ D.T, atol=1e-12)
    Y = rng.standard_normal((4, 4))
    np.testing.assert_allclose(kerdock_adjoint_2d(Y, K), D.T @ Y @ D, atol=1e-12)


def test_2d_zero_and_size():
    K = KerdockParams.build(2, 1)
    np.testing.assert_array_equal(kerdock_forward_2d(np.zeros((8, 8)), K), 0)
    with pytest.raises(ValueError):
        kerdock_forward_2d(np.zeros((4, 4)), K)


def _output_block(j):
    return slice(0, 1) if j < 0 else scale_slice(j)


@pytest.mark.parametrize("m,p", [(2, 1), (3, 2), (5, 3), (6, 1)])
def test_scale_preservation(m, p):
    K = KerdockParams.build(m, p)
    n = 1 << (m + p)
    Y = kerdock_forward(haar_inverse_flat(np.eye(n)), K)  # row k: image of Haar atom k
    for s in range(p, m + p):
        rows = Y[scale_slice(s)]
        block = scale_slice(s - p)
        off = rows.copy()
        off[:, block] = 0
        assert (off**2).sum() < 1e-24
        assert (rows[:, block] ** 2).sum() > 0.5


@pytest.mark.parametrize("m,p", [(3, 2), (4, 3), (6, 2)])
def test_coarse_scale_blindness(rng, m, p):
    K = KerdockParams.build(m, p)
    n = 1 << (m + p)
    w = np.zeros(n)
    w[1 : 1 << p] = rng.standard_normal((1 << p) - 1)  # Haar scales 0..p-1, zero dc
    assert np.linalg.norm(kerdock_forward(haar_inverse_flat(w), K)) < 1e-12


def test_dc_goes_to_first_output(rng):
    K = KerdockParams.build(4, 2)
    x = rng.standard_normal(64)
    sub_dc = haar_forward_flat(x.reshape(4, 16))[:, 0]
    assert kerdock_forward(x, K)[0] == pytest.approx(sub_dc.sum())
