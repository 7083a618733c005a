import numpy as np
import pytest

from gpemva.data import SampleSet, center
from gpemva.kernels import KernelError, KernelSpec, center_gram, gram, kernel_project, kernel_rows

LIN = KernelSpec("linear")


def test_linear_orthonormal_columns():
    np.testing.assert_array_equal(gram(SampleSet(np.eye(2)), LIN).K, np.eye(2))


def test_rbf_duplicates():
    X = np.array([[0.3, 0.3, 1.0], [1.0, 1.0, 2.0]])
    K = gram(SampleSet(X), KernelSpec("rbf", gamma=5.0)).K
    assert K[0, 1] == 1.0 and K[0, 0] == 1.0


def test_linear_gram_oracle(rng):
    X = rng.normal(size=(4, 7))
    K = gram(SampleSet(X), LIN).K
    assert np.abs(K - X.T @ X).max() <= 1e-12
    np.testing.assert_array_equal(K, K.T)


@pytest.mark.parametrize("spec", [KernelSpec("rbf", gamma=0.7), KernelSpec("poly", degree=3, offset=1.0), LIN])
def test_gram_psd(rng, spec):
    K = gram(SampleSet(rng.normal(size=(3, 12))), spec).K
    w = np.linalg.eigvalsh(K)
    assert w[0] >= -1e-8 * w[-1]


def test_poly_formula(rng):
    X = rng.normal(size=(2, 3))
    K = gram(SampleSet(X), KernelSpec("poly", degree=2, offset=0.5)).K
    np.testing.assert_allclose(K, (X.T @ X + 0.5) ** 2, rtol=1e-14)


@pytest.mark.parametrize("kw", [dict(kind="rbf", gamma=0.0), dict(kind="poly", degree=0), dict(kind="cosine")])
def test_invalid_spec(kw):
    with pytest.raises(KernelError):
        KernelSpec(**kw)


def test_center_idempotent_and_zero_sums(rng):
    from gpemva.kernels import GramMatrix

    G = center_gram(gram(SampleSet(rng.normal(size=(2, 6))), KernelSpec("rbf")))
    again = center_gram(GramMatrix(G.K, G.spec, G.train))
    np.testing.assert_allclose(again.K, G.K, atol=1e-10)
    assert np.abs(G.K.sum(axis=0)).max() <= 1e-9 * np.abs(G.K).max()
    assert np.abs(G.K.sum(axis=1)).max() <= 1e-9 * np.abs(G.K).max()


def test_center_all_ones():
    from gpemva.kernels import GramMatrix

    G = center_gram(GramMatrix(np.ones((4, 4)), LIN, np.zeros((1, 4))))
    np.testing.assert_allclose(G.K, 0.0, atol=1e-15)


def test_center_commutes_with_linear(rng):
    X = rng.normal(size=(3, 8)) + 2.0
    Kc = center_gram(gram(SampleSet(X), LIN)).K
    Xc = center(SampleSet(X)).samples
    np.testing.assert_allclose(Kc, Xc.T @ Xc, atol=1e-10)


def test_project_reproducing(rng):
    X = rng.normal(size=(3, 5))
    G = gram(SampleSet(X), LIN)
    a = rng.normal(size=5)
    assert kernel_project(a, G, X[:, 2]) == pytest.approx((G.K @ a)[2], abs=1e-12)
    assert kernel_project(np.zeros(5), G, X[:, 0]) == 0.0


def test_project_primal_dual(rng):
    X = rng.normal(size=(3, 6)) + 1.0
    Gc = center_gram(gram(SampleSet(X), LIN))
    a = rng.normal(size=6)
    Xc = center(SampleSet(X)).samples
    w = Xc @ a
    xn = rng.normal(size=3)
    assert abs(kernel_project(a, Gc, xn) - w @ (xn - X.mean(axis=1))) <= 1e-10


def test_kernel_rows_match_training_gram(rng):
    X = rng.normal(size=(2, 7))
    Gc = center_gram(gram(SampleSet(X), KernelSpec("rbf", gamma=0.4)))
    np.testing.assert_allclose(kernel_rows(Gc, X), Gc.K, atol=1e-12)


def test_project_errors(rng):
    G = gram(SampleSet(rng.normal(size=(2, 4))), LIN)
    with pytest.raises(KernelError):
        kernel_project(np.ones(3), G, np.zeros(2))
    with pytest.raises(KernelError):
        kernel_project(np.ones(4), G, np.zeros(3))
