import numpy as np
import pytest

from gpemva.linalg import LinalgError, generalized_sym_eig, sym_eig, truncated_svd


def test_sym_eig_diagonal():
    s = sym_eig(np.diag([2.0, 1.0]))
    np.testing.assert_allclose(s.eigenvalues, [2.0, 1.0])
    np.testing.assert_allclose(np.abs(s.eigenvectors), np.eye(2))


def test_sym_eig_swap_matrix():
    s = sym_eig([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(s.eigenvalues, [1.0, -1.0], atol=1e-15)
    r2 = 1 / np.sqrt(2)
    np.testing.assert_allclose(np.abs(s.eigenvectors[:, 0]), [r2, r2], atol=1e-15)
    v2 = s.eigenvectors[:, 1]
    np.testing.assert_allclose(v2 * np.sign(v2[0]), [r2, -r2], atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_sym_eig_random_residual_and_trace(seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(6, 6))
    M = M + M.T
    s = sym_eig(M)
    V, lam = s.eigenvectors, s.eigenvalues
    assert np.all(np.diff(lam) <= 0)
    fro = np.linalg.norm(M)
    for k in range(6):
        assert np.linalg.norm(M @ V[:, k] - lam[k] * V[:, k]) <= 1e-10 * (1 + fro)
    np.testing.assert_allclose(V.T @ V, np.eye(6), atol=1e-10)
    assert abs(lam.sum() - np.trace(M)) <= 1e-10 * (1 + abs(np.trace(M)))


def test_sym_eig_ties_keep_index_order():
    s = sym_eig(np.eye(3))
    np.testing.assert_array_equal(s.eigenvectors, np.eye(3))


@pytest.mark.parametrize(
    "M",
    [np.ones((2, 3)), np.array([[1.0, 2.0], [0.0, 1.0]]), np.array([[np.nan, 0.0], [0.0, 1.0]])],
    ids=["non-square", "asymmetric", "nan"],
)
def test_sym_eig_rejects(M):
    with pytest.raises(LinalgError):
        sym_eig(M)


def test_truncated_svd_diagonal():
    U, s, V = truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
    np.testing.assert_allclose(s, [3.0, 2.0])


def test_truncated_svd_rank_one():
    a, b = np.array([1.0, -2.0, 0.5]), np.array([2.0, 1.0])
    M = np.outer(a, b)
    U, s, V = truncated_svd(M, 1)
    assert np.abs(U * s @ V.T - M).max() <= 1e-12


def test_truncated_svd_full_reconstruction(rng):
    M = rng.normal(size=(5, 3))
    U, s, V = truncated_svd(M, 3)
    assert np.abs((U * s) @ V.T - M).max() <= 1e-10
    np.testing.assert_allclose(U.T @ U, np.eye(3), atol=1e-10)
    np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-10)
    # singular values against the eigenvalues of M^T M (numpy oracle)
    np.testing.assert_allclose(s**2, np.sort(np.linalg.eigvalsh(M.T @ M))[::-1], rtol=1e-10)


def test_truncated_svd_is_best_rank_k(rng):
    M = rng.normal(size=(4, 6))
    U, s, V = truncated_svd(M, 2)
    full = np.linalg.svd(M, compute_uv=False)
    err = np.linalg.norm(M - (U * s) @ V.T)
    assert abs(err - np.sqrt((full[2:] ** 2).sum())) <= 1e-10
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)


def test_truncated_svd_rank_deficient_columns_orthonormal():
    M = np.outer([1.0, 2.0, 3.0], [1.0, 0.0, 1.0])
    U, s, V = truncated_svd(M, 3)
    np.testing.assert_allclose(U.T @ U, np.eye(3), atol=1e-10)
    np.testing.assert_allclose(s[1:], 0.0)


@pytest.mark.parametrize("K", [0, 4])
def test_truncated_svd_k_out_of_range(K):
    with pytest.raises(LinalgError):
        truncated_svd(np.ones((3, 3)), K)


def test_generalized_identity_b():
    s = generalized_sym_eig(np.diag([2.0, 1.0]), np.eye(2))
    np.testing.assert_allclose(s.eigenvalues, [2.0, 1.0])


def test_generalized_diagonal_pencil():
    s = generalized_sym_eig(np.diag([2.0, 1.0]), np.diag([2.0, 2.0]))
    np.testing.assert_allclose(s.eigenvalues, [1.0, 0.5])
    V = s.eigenvectors
    np.testing.assert_allclose(V.T @ np.diag([2.0, 2.0]) @ V, np.eye(2), atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_generalized_matches_inverse_oracle(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(5, 5))
    A = A + A.T
    C = rng.normal(size=(5, 5))
    B = C.T @ C + 0.1 * np.eye(5)
    s = generalized_sym_eig(A, B)
    oracle = np.sort(np.linalg.eigvals(np.linalg.solve(B, A)).real)[::-1]
    np.testing.assert_allclose(s.eigenvalues, oracle, atol=1e-8)
    fro = np.linalg.norm(A)
    for lam, w in zip(s.eigenvalues, s.eigenvectors.T):
        assert abs(w @ B @ w - 1.0) <= 1e-10
        assert np.linalg.norm(A @ w - lam * B @ w) <= 1e-8 * (1 + fro)


def test_generalized_range_restriction():
    A = np.diag([3.0, 5.0])
    B = np.diag([1.0, 0.0])
    s = generalized_sym_eig(A, B)
    np.testing.assert_allclose(s.eigenvalues, [3.0])


def test_generalized_r_selection_and_truncation():
    A, B = np.diag([1.0, 2.0, 3.0]), np.eye(3)
    np.testing.assert_allclose(generalized_sym_eig(A, B, r=2).eigenvalues, [3.0, 2.0])
    np.testing.assert_allclose(generalized_sym_eig(A, B, r=2, end="smallest").eigenvalues, [2.0, 1.0])
    s = generalized_sym_eig(A, np.diag([1.0, 1.0, 0.0]), r=3)
    assert s.truncated and len(s) == 2


def test_generalized_joint_scaling_invariance(rng):
    A = rng.normal(size=(4, 4))
    A = A + A.T
    C = rng.normal(size=(4, 4))
    B = C @ C.T + np.eye(4)
    s1 = generalized_sym_eig(A, B)
    s2 = generalized_sym_eig(7.5 * A, 7.5 * B)
    np.testing.assert_allclose(s1.eigenvalues, s2.eigenvalues, rtol=1e-10)
    # vectors rescale by 1/sqrt(c) under B-normalization; compare directions up to sign
    V1 = s1.eigenvectors / np.linalg.norm(s1.eigenvectors, axis=0)
    V2 = s2.eigenvectors / np.linalg.norm(s2.eigenvectors, axis=0)
    np.testing.assert_allclose(np.abs(np.sum(V1 * V2, axis=0)), 1.0, atol=1e-9)


def test_generalized_errors():
    with pytest.raises(LinalgError):
        generalized_sym_eig(np.eye(2), np.zeros((2, 2)))
    with pytest.raises(LinalgError):
        generalized_sym_eig(np.eye(2), np.diag([1.0, -1.0]))
    with pytest.raises(LinalgError):
        generalized_sym_eig(np.eye(2), np.eye(3))
