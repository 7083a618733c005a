"""Fitting, projection and objective evaluation for built pencils."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .gpe import materialize
from .kernels import GramMatrix, kernel_rows
from .linalg import generalized_sym_eig
from .templates import TRIVIAL_TOL, BuiltPencil, TemplateDescriptor, build

NEGATIVE_TOL = 1e-12
SIGN_CONVENTION = "max-abs-positive/v1"


class ModelError(ValueError):
    pass


def canonical_signs(V):
    """Flip columns so the largest-magnitude entry is positive (first index on ties)."""
    V = np.array(V, dtype=float)
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


@dataclass(frozen=True)
class FittedModel:
    """Solved pencil.

    ``vectors`` are the B-normalized eigenvectors (``w^T B w = 1``);
    ``W = vectors * weights`` where ``weights`` is ``sqrt(lambda)`` for
    largest-end templates and one otherwise.
    """

    descriptor: TemplateDescriptor
    params: Dict[str, Any]
    eigenvalues: np.ndarray
    vectors: np.ndarray
    weights: np.ndarray
    block_partition: Optional[Tuple[int, int]] = None
    means: Dict[str, np.ndarray] = field(default_factory=dict)
    grams: Dict[str, GramMatrix] = field(default_factory=dict)
    train: Optional[np.ndarray] = None
    truncated: bool = False

    @property
    def W(self):
        return self.vectors * self.weights

    @property
    def r(self):
        return len(self.eigenvalues)

    def split(self, M=None):
        """``(M_x, M_y)`` row blocks of ``M`` (default ``W``) by block partition."""
        M = self.W if M is None else M
        if self.block_partition is None:
            return M, None
        dx = self.block_partition[0]
        return M[:dx], M[dx:]


def fit(bp: BuiltPencil, r: Optional[int] = None) -> FittedModel:
    """Solve the pencil and keep ``r`` components from the informative end.

    Largest-end templates drop negative eigenvalues (the mirrored half of
    block pencils) and weight vectors by ``sqrt(lambda)``. Templates flagged
    ``skip_trivial`` drop eigenvalues below ``1e-9 * lambda_max`` first.
    """
    if r is not None and r < 1:
        raise ModelError("r must be >= 1")
    desc = bp.descriptor
    A, B = bp.materialize()
    spec = generalized_sym_eig(A, B)
    lam, V = spec.eigenvalues, spec.eigenvectors
    top = np.abs(lam).max() if lam.size else 0.0
    keep = np.ones(lam.shape, dtype=bool)
    if desc.skip_trivial:
        keep &= lam >= TRIVIAL_TOL * (lam.max() if lam.size else 0.0)
    if desc.spectrum_end == "largest":
        keep &= lam >= -NEGATIVE_TOL * top
    lam, V = lam[keep], V[:, keep]
    if desc.spectrum_end == "smallest":
        lam, V = lam[::-1], V[:, ::-1]
    avail = len(lam)
    if r is None:
        r = avail
    truncated = r > avail
    lam, V = lam[:r].copy(), canonical_signs(V[:, :r])
    if desc.spectrum_end == "largest":
        weights = np.sqrt(np.clip(lam, 0.0, None))
    else:
        weights = np.ones_like(lam)
    return FittedModel(desc, dict(bp.params), lam, V, weights, bp.block_partition,
                       dict(bp.means), dict(bp.grams), bp.train, truncated)


def _rows(X, d, name):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != d:
        raise ModelError(f"{name} has {X.shape[0]} features, model expects {d}")
    return X


def transform(m: FittedModel, x=None, y=None) -> np.ndarray:
    """Embed new samples (columns of ``x`` / ``y``); returns ``(r, N_new)``.

    Block-partitioned models project each supplied view with its own block
    and sum the projections, so passing one view gives that view's
    canonical variates.
    """
    desc = m.descriptor
    if x is None and y is None:
        raise ModelError("nothing to transform")
    if desc.transductive:
        if y is not None:
            raise ModelError(f"{desc.name} takes a single view")
        X = _rows(x, m.train.shape[0], "x")
        if X.shape != m.train.shape or not np.array_equal(X, m.train):
            raise ModelError(f"{desc.name} is transductive: only the training samples can be embedded")
        return m.W.T.copy()
    if desc.dual:
        parts = []
        Wx, Wy = m.split()
        for view, data, Wv in (("x", x, Wx), ("y", y, Wy)):
            if data is None:
                continue
            if Wv is None:
                raise ModelError(f"{desc.name} has no {view} view")
            g = m.grams[view]
            parts.append((kernel_rows(g, _rows(data, g.train.shape[0], view)) @ Wv).T)
        return _sum_views(parts)
    Wx, Wy = m.split()
    parts = []
    for view, data, Wv in (("x", x, Wx), ("y", y, Wy)):
        if data is None:
            continue
        if Wv is None:
            raise ModelError(f"{desc.name} has no {view} view")
        X = _rows(data, Wv.shape[0], view)
        parts.append(Wv.T @ (X - m.means[view][:, None]))
    return _sum_views(parts)


def _sum_views(parts):
    if len(parts) == 2 and parts[0].shape != parts[1].shape:
        raise ModelError("views have different sample counts")
    return parts[0] + parts[1] if len(parts) == 2 else parts[0]


def rayleigh(A, B, V):
    """``(v^T A v) / (v^T B v)`` per column."""
    return np.einsum("ij,ij->j", V, A @ V) / np.einsum("ij,ij->j", V, B @ V)


def block_correlation(A, B, V, dx):
    """``w_x^T A_xy w_y / sqrt(w_x^T B_xx w_x * w_y^T B_yy w_y)`` per column."""
    Vx, Vy = V[:dx], V[dx:]
    num = np.einsum("ij,ij->j", Vx, A[:dx, dx:] @ Vy)
    bx = np.einsum("ij,ij->j", Vx, B[:dx, :dx] @ Vx)
    by = np.einsum("ij,ij->j", Vy, B[dx:, dx:] @ Vy)
    return num / np.sqrt(bx * by)


def objective_eval(m: FittedModel, x, y=None, labels=None, n_paired=None):
    """Objective of each component on a dataset.

    The template's pencil is rebuilt on the given data with the model's
    hyperparameters. CCA-type models report canonical correlations, PCA
    reports variances, everything else the generalized Rayleigh quotient.
    Returns ``(kind, values)``.
    """
    desc = m.descriptor
    bp = build(desc.name, x, y, labels, n_paired, **m.params)
    A, B = bp.materialize()
    if A.shape[0] != m.vectors.shape[0]:
        raise ModelError(
            f"{desc.name} components live in a {m.vectors.shape[0]}-dimensional space; "
            f"the data gives {A.shape[0]} (coefficient-space models need the training sample count)"
        )
    if desc.objective == "correlation":
        return "correlation", block_correlation(A, B, m.vectors, m.block_partition[0])
    return desc.objective, rayleigh(A, B, m.vectors)
