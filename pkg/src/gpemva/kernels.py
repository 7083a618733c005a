"""Gram matrices, feature-space centering and kernel projections."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .data import SampleSet


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "linear"
    gamma: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "rbf", "poly"):
            raise KernelError(f"unknown kernel {self.kind!r}")
        if self.kind == "rbf" and not self.gamma > 0:
            raise KernelError("rbf kernel needs gamma > 0")
        if self.kind == "poly" and (int(self.degree) != self.degree or self.degree < 1):
            raise KernelError("polynomial kernel needs an integer degree >= 1")

    def __call__(self, A, B):
        """Kernel values between columns of ``A`` (d, n) and ``B`` (d, m)."""
        if A.shape[0] != B.shape[0]:
            raise KernelError(f"feature dimensions differ: {A.shape[0]} vs {B.shape[0]}")
        inner = A.T @ B
        if self.kind == "linear":
            return inner
        if self.kind == "poly":
            return (inner + self.offset) ** int(self.degree)
        sa = (A * A).sum(axis=0)
        sb = (B * B).sum(axis=0)
        return np.exp(-self.gamma * np.maximum(sa[:, None] + sb[None, :] - 2.0 * inner, 0.0))

    def to_dict(self):
        return {"kind": self.kind, "gamma": self.gamma, "degree": self.degree, "offset": self.offset}


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix plus what is needed to project new samples.

    ``raw_col_means`` and ``raw_mean`` are statistics of the uncentered
    matrix, used to apply the same centering to new kernel rows.
    """

    K: np.ndarray
    spec: KernelSpec
    train: np.ndarray
    centered: bool = False
    raw_col_means: Optional[np.ndarray] = field(default=None, repr=False)
    raw_mean: float = 0.0

    @property
    def n(self):
        return self.K.shape[0]


def gram(S: SampleSet, spec: KernelSpec) -> GramMatrix:
    X = S.samples
    n = X.shape[1]
    if n < 1:
        raise KernelError("Gram matrix of an empty sample set")
    K = spec(X, X)
    iu = np.triu_indices(n, 1)
    K[(iu[1], iu[0])] = K[iu]
    return GramMatrix(K, spec, X.copy())


def center_gram(G: GramMatrix) -> GramMatrix:
    """``H K H`` with ``H = I - 11^T / N``."""
    if G.centered:
        return G
    K = G.K
    col = K.mean(axis=0)
    tot = col.mean()
    Kc = K - col[None, :] - col[:, None] + tot
    Kc = 0.5 * (Kc + Kc.T)
    return GramMatrix(Kc, G.spec, G.train, True, col, float(tot))


def kernel_rows(G: GramMatrix, X_new) -> np.ndarray:
    """Kernel values ``k(x_new_i, x_n)``, centered like ``G``; shape (m, N)."""
    X_new = np.asarray(X_new, dtype=float)
    if X_new.ndim == 1:
        X_new = X_new[:, None]
    if X_new.shape[0] != G.train.shape[0]:
        raise KernelError(f"sample dimension {X_new.shape[0]} does not match training {G.train.shape[0]}")
    Kn = G.spec(X_new, G.train)
    if G.centered:
        Kn = Kn - Kn.mean(axis=1, keepdims=True) - G.raw_col_means[None, :] + G.raw_mean
    return Kn


def kernel_project(coeffs, G: GramMatrix, x_new) -> float:
    """``sum_n coeffs_n k(x_new, x_n)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (G.n,):
        raise KernelError(f"expected {G.n} coefficients, got {coeffs.shape}")
    return float(kernel_rows(G, x_new)[0] @ coeffs)
