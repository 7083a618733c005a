"""
Dense symmetric eigensolvers.

sym_eig
    eigendecomposition of a real symmetric matrix (cyclic Jacobi)
truncated_svd
    rank-K singular value decomposition through the smaller Gram matrix
generalized_sym_eig
    symmetric-definite pencil solver restricted to the numerical range of B

All routines work on ``numpy.ndarray`` and return fresh arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-9
RANGE_TOL = 1e-10
SVD_ZERO_TOL = 1e-12


class LinalgError(ValueError):
    """Raised when an input violates a solver precondition."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs sorted by non-increasing eigenvalue.

    ``eigenvectors[:, k]`` pairs with ``eigenvalues[k]``. ``truncated`` is set
    when fewer pairs than requested could be returned.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    truncated: bool = False

    def __len__(self):
        return len(self.eigenvalues)


def as_matrix(M, name="matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D float array."""
    A = np.array(M, dtype=float)
    if A.ndim != 2:
        raise LinalgError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise LinalgError(f"{name} has non-finite entries")
    return A


def _check_symmetric(M, name):
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise LinalgError(f"{name} must be square, got shape {M.shape}")
    scale = 1.0 + (np.abs(M).max() if M.size else 0.0)
    if M.size and np.abs(M - M.T).max() > SYMMETRY_TOL * scale:
        raise LinalgError(f"{name} is not symmetric")
    return 0.5 * (M + M.T)


@numba.njit(cache=True)
def _jacobi(A, tol, max_sweeps):
    """Cyclic-by-row Jacobi on a symmetric matrix, in place.

    Returns the diagonal, the accumulated rotations (columns are
    eigenvectors) and the number of sweeps run.
    """
    n = A.shape[0]
    Vt = np.eye(n)
    sweeps = 0
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                v = abs(A[i, j])
                if v > off:
                    off = v
        if off <= tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    A[k, p] = A[p, k]
                    A[k, q] = A[q, k]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    vpk = Vt[p, k]
                    vqk = Vt[q, k]
                    Vt[p, k] = c * vpk - s * vqk
                    Vt[q, k] = s * vpk + c * vqk
    return np.diag(A).copy(), Vt.T.copy(), sweeps


def sym_eig(M) -> Spectrum:
    """Eigendecomposition of a symmetric matrix.

    The input is symmetrized as ``(M + M.T) / 2`` and diagonalized by cyclic
    Jacobi rotations until the largest off-diagonal entry is at most
    ``1e-12 * ||M||_F`` (at most 100 sweeps). Eigenvalues are sorted in
    non-increasing order, ties kept in diagonal index order.
    """
    A = _check_symmetric(M, "M")
    if A.shape[0] == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)))
    tol = JACOBI_TOL * np.linalg.norm(A)
    w, V, _ = _jacobi(np.ascontiguousarray(A), tol, JACOBI_MAX_SWEEPS)
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], V[:, order])


def _complete_basis(U, n_cols):
    """Extend orthonormal columns of ``U`` to ``n_cols`` columns."""
    m = U.shape[0]
    cols = [U[:, j] for j in range(U.shape[1])]
    for e in np.eye(m):
        if len(cols) >= n_cols:
            break
        v = e.copy()
        for _ in range(2):
            for c in cols:
                v -= (c @ v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    return np.column_stack(cols) if cols else np.zeros((m, 0))


def truncated_svd(M, K: int):
    """Rank-``K`` SVD ``M ~ U_K diag(s_K) V_K^T``.

    Computed from the eigendecomposition of the smaller of ``M^T M`` and
    ``M M^T``. Singular values below ``1e-12 * s_max`` are set to zero and the
    matching singular vectors are completed to an orthonormal set.

    Returns
    -------
    U : (rows, K) array
    s : (K,) array
    V : (cols, K) array
    """
    M = as_matrix(M, "M")
    rows, cols = M.shape
    if not 1 <= K <= min(rows, cols):
        raise LinalgError(f"K={K} outside [1, {min(rows, cols)}]")
    tall = rows >= cols
    G = M.T @ M if tall else M @ M.T
    spec = sym_eig(G)
    s = np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    smax = s[0] if s.size else 0.0
    keep = s > SVD_ZERO_TOL * smax if smax > 0 else np.zeros_like(s, dtype=bool)
    s = np.where(keep, s, 0.0)
    rank = int(keep.sum())
    small = spec.eigenvectors
    big = (M @ small[:, :rank]) / s[:rank] if tall else (M.T @ small[:, :rank]) / s[:rank]
    big = _complete_basis(big, min(rows, cols))
    if tall:
        V, U = small, big
    else:
        U, V = small, big
    return U[:, :K], s[:K], V[:, :K]


def generalized_sym_eig(A, B, r=None, end="largest") -> Spectrum:
    """Solve ``A w = lam B w`` for symmetric ``A`` and PSD ``B``.

    The problem is restricted to the numerical range of ``B``: with
    ``B = V diag(b) V^T`` only directions with ``b_i > 1e-10 * b_max`` are
    kept, the pencil is whitened there and solved with :func:`sym_eig`.
    Returned vectors satisfy ``w^T B w = 1``.

    Parameters
    ----------
    r : int or None
        Number of pairs to return from the requested end. ``None`` returns
        every retained pair. When ``r`` exceeds the retained rank all pairs
        are returned and ``Spectrum.truncated`` is set.
    end : {'largest', 'smallest'}
        Which end of the spectrum to take the ``r`` pairs from. The result is
        always sorted non-increasing.
    """
    A = _check_symmetric(A, "A")
    B = _check_symmetric(B, "B")
    if A.shape != B.shape:
        raise LinalgError(f"pencil shapes differ: {A.shape} vs {B.shape}")
    if end not in ("largest", "smallest"):
        raise LinalgError(f"unknown spectrum end {end!r}")
    bspec = sym_eig(B)
    b = bspec.eigenvalues
    bmax = b[0] if b.size else 0.0
    if bmax <= 0.0:
        raise LinalgError("B is numerically zero; no range to solve on")
    if b[-1] < -SYMMETRY_TOL * bmax:
        raise LinalgError(f"B is not positive semi-definite (min eigenvalue {b[-1]:.3e})")
    keep = b > RANGE_TOL * bmax
    T = bspec.eigenvectors[:, keep] / np.sqrt(b[keep])
    white = T.T @ A @ T
    spec = sym_eig(0.5 * (white + white.T))
    lam = spec.eigenvalues
    W = T @ spec.eigenvectors
    n = len(lam)
    truncated = False
    if r is not None:
        if r < 1:
            raise LinalgError("r must be >= 1")
        if r > n:
            truncated = True
            r = n
        sel = slice(0, r) if end == "largest" else slice(n - r, n)
        lam, W = lam[sel], W[:, sel]
    return Spectrum(lam.copy(), W, truncated)
