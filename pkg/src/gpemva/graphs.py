"""Affinity graphs with local scaling, graph Laplacians and LFDA weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabelSet, SampleSet
from .linalg import as_matrix

SIGMA_FLOOR = 1e-12
DEFAULT_KNN = 7


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Affinity:
    A: np.ndarray
    k: int


@dataclass(frozen=True)
class LaplacianPair:
    D: np.ndarray
    L: np.ndarray


def _sq_distances(X):
    sq = (X * X).sum(axis=0)
    D2 = sq[:, None] + sq[None, :] - 2.0 * (X.T @ X)
    np.fill_diagonal(D2, 0.0)
    return np.maximum(D2, 0.0)


def _local_scaling(X, k):
    n = X.shape[1]
    D2 = _sq_distances(X)
    sigma = np.empty(n)
    for i in range(n):
        others = np.delete(np.arange(n), i)
        # stable sort: equal distances resolve to the lower sample index
        order = np.argsort(D2[i, others], kind="stable")
        sigma[i] = np.sqrt(D2[i, others[order[k - 1]]])
    sigma = np.maximum(sigma, SIGMA_FLOOR)
    A = np.exp(-D2 / np.outer(sigma, sigma))
    A = 0.5 * (A + A.T)
    np.fill_diagonal(A, 0.0)
    return A


def local_scaling_affinity(S: SampleSet, k: int = DEFAULT_KNN) -> Affinity:
    """``A_nm = exp(-|x_n - x_m|^2 / (s_n s_m))`` with ``s_n`` the distance from
    ``x_n`` to its k-th nearest neighbour; zero diagonal."""
    n = S.n
    if n < 2:
        raise GraphError("local scaling needs at least two samples")
    if not 1 <= k <= n - 1:
        raise GraphError(f"k={k} outside [1, {n - 1}]")
    return Affinity(_local_scaling(S.samples, k), k)


def classwise_affinity(S: SampleSet, labels: LabelSet, k: int = DEFAULT_KNN) -> Affinity:
    """Local-scaling affinity computed separately inside each class.

    Each class uses ``min(k, N_c - 1)`` neighbours; cross-class entries and
    singleton classes get zero affinity.
    """
    if len(labels) != S.n:
        raise GraphError(f"{len(labels)} labels for {S.n} samples")
    A = np.zeros((S.n, S.n))
    for c in range(labels.n_classes):
        idx = np.flatnonzero(labels.labels == c)
        if idx.size < 2:
            continue
        A[np.ix_(idx, idx)] = _local_scaling(S.samples[:, idx], min(k, idx.size - 1))
    return Affinity(A, k)


def laplacian(Q, signed: bool = False) -> LaplacianPair:
    """Degree matrix ``D = diag(Q 1)`` and Laplacian ``L = D - Q``.

    ``signed=True`` admits negative weights, as in the LFDA between-class
    weights; the result is then not guaranteed PSD by construction.
    """
    Q = as_matrix(Q, "Q")
    if Q.shape[0] != Q.shape[1]:
        raise GraphError("Q must be square")
    scale = 1.0 + (np.abs(Q).max() if Q.size else 0.0)
    if Q.size and np.abs(Q - Q.T).max() > 1e-12 * scale:
        raise GraphError("Q must be symmetric")
    if not signed and np.any(Q < 0):
        raise GraphError("Q must be non-negative")
    D = np.diag(Q.sum(axis=1))
    return LaplacianPair(D, D - Q)


def lfda_weights(A, labels: LabelSet, off_class_lw: str = "zero"):
    """LFDA between/within-class weight matrices.

    Same class ``c``: ``Q_lb = A (1/N - 1/N_c)``, ``Q_lw = A / N_c``.
    Different classes: ``Q_lb = 1/N`` and ``Q_lw = 0``; pass
    ``off_class_lw="uniform"`` to use ``1/N`` for ``Q_lw`` as well.
    """
    A = A.A if isinstance(A, Affinity) else as_matrix(A, "A")
    n = A.shape[0]
    if A.shape != (n, n) or len(labels) != n:
        raise GraphError(f"affinity {A.shape} does not match {len(labels)} labels")
    if off_class_lw not in ("zero", "uniform"):
        raise GraphError(f"unknown off_class_lw mode {off_class_lw!r}")
    lab = labels.labels
    nc = labels.class_counts[lab].astype(float)
    same = lab[:, None] == lab[None, :]
    Q_lb = np.where(same, A * (1.0 / n - 1.0 / nc[:, None]), 1.0 / n)
    off = 1.0 / n if off_class_lw == "uniform" else 0.0
    Q_lw = np.where(same, A / nc[:, None], off)
    return Q_lb, Q_lw
