"""Sample sets, labels and scatter matrices.

Samples are stored one per column, so a set of ``N`` samples in ``d``
dimensions is a ``(d, N)`` array.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .gpe import GpeMatrix
from .linalg import as_matrix


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class SampleSet:
    samples: np.ndarray
    mean: Optional[np.ndarray] = None
    centered: bool = False

    def __post_init__(self):
        X = as_matrix(self.samples, "samples")
        object.__setattr__(self, "samples", X)
        if self.mean is None:
            object.__setattr__(self, "mean", np.zeros(X.shape[0]))
        else:
            object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))

    @classmethod
    def from_rows(cls, rows):
        """Build from a (N, d) array of samples stored row-wise."""
        rows = np.asarray(rows, dtype=float)
        return cls(rows.T.copy())

    @property
    def dim(self):
        return self.samples.shape[0]

    @property
    def n(self):
        return self.samples.shape[1]

    def columns(self, idx):
        return SampleSet(self.samples[:, idx], self.mean, self.centered)


@dataclass(frozen=True)
class PairedDataset:
    """Two views whose first ``n_paired`` columns co-occur."""

    x: SampleSet
    y: SampleSet
    n_paired: int

    def __post_init__(self):
        if not 0 <= self.n_paired <= min(self.x.n, self.y.n):
            raise DataError(f"n_paired={self.n_paired} exceeds the smaller view ({min(self.x.n, self.y.n)})")


@dataclass(frozen=True)
class LabelSet:
    labels: np.ndarray
    names: tuple = field(default=())

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=int)
        if lab.ndim != 1:
            raise DataError("labels must be 1-D")
        m = int(lab.max()) + 1 if lab.size else 0
        if lab.size and (lab.min() < 0 or np.any(np.bincount(lab, minlength=m) == 0)):
            raise DataError("every class index in [0, M) must occur at least once")
        object.__setattr__(self, "labels", lab)
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(m)))

    @classmethod
    def from_values(cls, values: Sequence):
        """Re-index arbitrary labels densely in first-occurrence order."""
        index = {}
        for v in values:
            index.setdefault(v, len(index))
        return cls(np.array([index[v] for v in values], dtype=int), tuple(str(k) for k in index))

    @property
    def n_classes(self):
        return len(self.class_counts)

    @property
    def class_counts(self):
        if not self.labels.size:
            return np.zeros(0, dtype=int)
        return np.bincount(self.labels)

    def __len__(self):
        return len(self.labels)

    def subset(self, idx):
        """Labels restricted to ``idx``, re-indexed densely."""
        return LabelSet.from_values([int(v) for v in self.labels[idx]])


def center(S: SampleSet) -> SampleSet:
    """Subtract the column mean; the removed mean is kept for later transforms."""
    if S.n < 1:
        raise DataError("cannot center an empty sample set")
    mu = S.samples.mean(axis=1)
    return SampleSet(S.samples - mu[:, None], S.mean + mu, True)


def indicator_matrix(labels: LabelSet) -> np.ndarray:
    """One-hot class indicators, shape (M, N)."""
    Y = np.zeros((labels.n_classes, len(labels)))
    Y[labels.labels, np.arange(len(labels))] = 1.0
    return Y


def scatter(A: SampleSet, B: Optional[SampleSet] = None) -> GpeMatrix:
    """``A B^T / N`` as a single data term with ``L1 = I / N``."""
    B = A if B is None else B
    if A.n != B.n:
        raise DataError(f"sample counts differ: {A.n} vs {B.n}")
    if A.n == 0:
        raise DataError("scatter of an empty sample set")
    return GpeMatrix.from_data(A.samples, np.eye(A.n) / A.n, B.samples)


def pairwise_scatter_oracle(A: SampleSet, B: SampleSet, Q, signed=False) -> np.ndarray:
    """Literal ``1/2 sum_nm Q_nm (a_n - a_m)(b_n - b_m)^T`` by double loop.

    ``signed=True`` admits negative weights (LFDA between-class weights).
    """
    Q = as_matrix(Q, "Q")
    n = A.n
    if B.n != n or Q.shape != (n, n):
        raise DataError("Q must be N x N for N samples in both sets")
    if np.abs(Q - Q.T).max(initial=0.0) > 1e-12 * (1.0 + np.abs(Q).max(initial=0.0)):
        raise DataError("Q must be symmetric")
    if not signed and np.any(Q < 0):
        raise DataError("Q must be non-negative")
    out = np.zeros((A.dim, B.dim))
    for i in range(n):
        for j in range(n):
            if Q[i, j] != 0.0:
                out += Q[i, j] * np.outer(A.samples[:, i] - A.samples[:, j], B.samples[:, i] - B.samples[:, j])
    return 0.5 * out


def class_scatter_oracle(S: SampleSet, labels: LabelSet):
    """Between- and within-class scatter from class means, by explicit loops.

    ``S_b = sum_c (N_c / N)(mu_c - mu)(mu_c - mu)^T`` and
    ``S_w = (1 / N) sum_c sum_{n in c} (x_n - mu_c)(x_n - mu_c)^T``.
    """
    X = S.samples
    n = X.shape[1]
    mu = X.mean(axis=1)
    Sb = np.zeros((X.shape[0],) * 2)
    Sw = np.zeros_like(Sb)
    for c in range(labels.n_classes):
        Xc = X[:, labels.labels == c]
        mc = Xc.mean(axis=1)
        Sb += Xc.shape[1] / n * np.outer(mc - mu, mc - mu)
        for col in Xc.T:
            Sw += np.outer(col - mc, col - mc) / n
    return Sb, Sw


def split_complete(D: PairedDataset):
    """``(X_complete, Y_complete, X_incomplete, Y_incomplete)`` column slices."""
    k = D.n_paired
    return (
        D.x.columns(slice(0, k)),
        D.y.columns(slice(0, k)),
        D.x.columns(slice(k, None)),
        D.y.columns(slice(k, None)),
    )
