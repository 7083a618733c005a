import numpy as np
import pytest


def subspace_sin(A, B):
    """Sine of the largest principal angle between column spaces of A and B.

    Computed with numpy's QR, independently of the package's solvers.
    """
    Qa, _ = np.linalg.qr(A)
    Qb, _ = np.linalg.qr(B)
    R = Qa - Qb @ (Qb.T @ Qa)
    return np.linalg.norm(R, 2)


def random_gpe(rng, dx, dy, n_terms=2, n=6):
    from gpemva.gpe import GpeMatrix, GpeTerm

    terms = []
    for _ in range(n_terms):
        C = rng.normal(size=(n, n))
        terms.append(GpeTerm(rng.normal(size=(dx, n)), C @ C.T, rng.normal(size=(dy, n))))
    return GpeMatrix(tuple(terms), rng.normal(size=(dx, dy)))


def random_spd(rng, n, ridge=0.1):
    C = rng.normal(size=(n, n))
    return C.T @ C + ridge * np.eye(n)


def three_class(rng, n_per=(12, 11, 13), d=4, sep=2.0):
    labels = np.repeat(np.arange(len(n_per)), n_per)
    X = rng.normal(size=(d, labels.size))
    X[0] += sep * labels
    X[1] += sep * (labels == 1)
    return X, labels


@pytest.fixture
def rng():
    return np.random.default_rng(20260417)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
