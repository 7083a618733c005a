"""
Generalized pairwise expressions.

A generalized pairwise expression (GPE) is a second-order statistic written
as a sum of data terms ``X L1 Y^T`` plus a dense bias term. Scaling and
addition stay lazy (term lists are rescaled or concatenated); products are
stored as a dense bias.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .linalg import as_matrix

PSD_TOL = 1e-9
SYMMETRY_TOL = 1e-9


class GpeError(ValueError):
    pass


class GpeWarning(UserWarning):
    pass


def _min_eig_ratio(L):
    if np.count_nonzero(L - np.diag(np.diag(L))) == 0:
        d = np.diag(L)
        return d.min(), np.abs(d).max()
    w = np.linalg.eigvalsh(L)
    return w[0], np.abs(w).max()


@dataclass(frozen=True)
class GpeTerm:
    """Data term ``x @ l1 @ y.T`` with ``x`` (d_x, N), ``l1`` (N, N), ``y`` (d_y, N)."""

    x: np.ndarray
    l1: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, l1, y = as_matrix(self.x, "X"), as_matrix(self.l1, "L1"), as_matrix(self.y, "Y")
        n = x.shape[1]
        if l1.shape != (n, n) or y.shape[1] != n:
            raise GpeError(f"inconsistent term shapes X{x.shape} L1{l1.shape} Y{y.shape}")
        scale = 1.0 + (np.abs(l1).max() if l1.size else 0.0)
        if l1.size and np.abs(l1 - l1.T).max() > SYMMETRY_TOL * scale:
            raise GpeError("L1 must be symmetric")
        if l1.size:
            lo, hi = _min_eig_ratio(l1)
            if lo < -PSD_TOL * hi:
                warnings.warn(f"L1 is not PSD (min eigenvalue {lo:.3e})", GpeWarning, stacklevel=3)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "y", y)

    @property
    def shape(self):
        return (self.x.shape[0], self.y.shape[0])

    def materialize(self):
        return self.x @ self.l1 @ self.y.T


@dataclass(frozen=True)
class GpeMatrix:
    terms: Tuple[GpeTerm, ...]
    bias: np.ndarray

    def __post_init__(self):
        bias = as_matrix(self.bias, "bias")
        terms = tuple(self.terms)
        for t in terms:
            if t.shape != bias.shape:
                raise GpeError(f"term shape {t.shape} does not match bias shape {bias.shape}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "bias", bias)

    @property
    def shape(self):
        return self.bias.shape

    @classmethod
    def from_data(cls, x, l1, y=None):
        """Single data term with a zero bias."""
        term = GpeTerm(x, l1, x if y is None else y)
        return cls((term,), np.zeros(term.shape))

    @classmethod
    def from_bias(cls, bias):
        return cls((), bias)

    @classmethod
    def zeros(cls, rows, cols):
        return cls((), np.zeros((rows, cols)))

    @classmethod
    def identity(cls, d):
        return cls((), np.eye(d))


@dataclass(frozen=True)
class BlockMatrix:
    """2x2 grid of GPEs with row/column partition ``(d_x, d_y)``."""

    blocks: Tuple[Tuple[GpeMatrix, GpeMatrix], Tuple[GpeMatrix, GpeMatrix]]

    @property
    def partition(self):
        return (self.blocks[0][0].shape[0], self.blocks[1][1].shape[0])

    @property
    def shape(self):
        n = sum(self.partition)
        return (n, n)


Expr = Union[GpeMatrix, BlockMatrix]


@dataclass(frozen=True)
class Pencil:
    """Generalized eigenproblem ``over w = lam under w``."""

    over: Expr
    under: Expr

    def __post_init__(self):
        if self.over.shape != self.under.shape or self.over.shape[0] != self.over.shape[1]:
            raise GpeError(f"pencil sides must be square and equal: {self.over.shape} vs {self.under.shape}")

    def materialize(self):
        A, B = materialize(self.over), materialize(self.under)
        for name, M in (("over", A), ("under", B)):
            scale = 1.0 + np.abs(M).max()
            if np.abs(M - M.T).max() > SYMMETRY_TOL * scale:
                raise GpeError(f"materialized {name} side is not symmetric")
        return A, B


def _check_beta(beta):
    if not beta > 0:
        raise GpeError(f"scale factor must be positive, got {beta}")


def scale_gpe(G: Expr, beta: float) -> Expr:
    """``beta * G``: every L1 and the bias are multiplied by ``beta``."""
    _check_beta(beta)
    if isinstance(G, BlockMatrix):
        return BlockMatrix(tuple(tuple(scale_gpe(b, beta) for b in row) for row in G.blocks))
    terms = tuple(GpeTerm(t.x, beta * t.l1, t.y) for t in G.terms)
    return GpeMatrix(terms, beta * G.bias)


def add_gpe(G1: Expr, G2: Expr) -> Expr:
    """``G1 + G2``. Block matrices with a matching partition add blockwise;
    a block matrix added to a plain GPE is flattened first."""
    if isinstance(G1, BlockMatrix) and isinstance(G2, BlockMatrix) and G1.partition == G2.partition:
        return BlockMatrix(tuple(
            tuple(add_gpe(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(G1.blocks, G2.blocks)
        ))
    G1, G2 = flatten(G1), flatten(G2)
    if G1.shape != G2.shape:
        raise GpeError(f"shape mismatch {G1.shape} vs {G2.shape}")
    return GpeMatrix(G1.terms + G2.terms, G1.bias + G2.bias)


def multiply_gpe(G1: Expr, G2: Expr) -> GpeMatrix:
    """``G1 @ G2`` stored as a bias-only GPE holding the dense product."""
    A, B = materialize(G1), materialize(G2)
    if A.shape[1] != B.shape[0]:
        raise GpeError(f"inner dimensions differ: {A.shape} @ {B.shape}")
    return GpeMatrix.from_bias(A @ B)


def convex_combine(G1: Expr, G2: Expr, beta: float) -> Expr:
    """``beta * G1 + (1 - beta) * G2``; a zero-weight operand is dropped."""
    if not 0.0 <= beta <= 1.0:
        raise GpeError(f"beta must lie in [0, 1], got {beta}")
    if G1.shape != G2.shape:
        raise GpeError(f"shape mismatch {G1.shape} vs {G2.shape}")
    if beta == 1.0:
        return G1
    if beta == 0.0:
        return G2
    return add_gpe(scale_gpe(G1, beta), scale_gpe(G2, 1.0 - beta))


def assemble_block(b11: GpeMatrix, b12: GpeMatrix, b21: GpeMatrix, b22: GpeMatrix) -> BlockMatrix:
    dx, dy = b11.shape[0], b22.shape[0]
    expected = {"b11": (dx, dx), "b12": (dx, dy), "b21": (dy, dx), "b22": (dy, dy)}
    for name, blk in zip(expected, (b11, b12, b21, b22)):
        if isinstance(blk, BlockMatrix) or blk.shape != expected[name]:
            raise GpeError(f"block {name} has shape {blk.shape}, expected {expected[name]}")
    return BlockMatrix(((b11, b12), (b21, b22)))


def _embed_rows(M, offset, total):
    out = np.zeros((total, M.shape[1]))
    out[offset:offset + M.shape[0]] = M
    return out


def flatten(G: Expr) -> GpeMatrix:
    """Rewrite a block matrix as one GPE by zero-padding each term's data."""
    if isinstance(G, GpeMatrix):
        return G
    n = G.shape[0]
    offsets = (0, G.partition[0])
    terms = []
    bias = np.zeros((n, n))
    for i, row in enumerate(G.blocks):
        for j, blk in enumerate(row):
            for t in blk.terms:
                terms.append(GpeTerm(_embed_rows(t.x, offsets[i], n), t.l1, _embed_rows(t.y, offsets[j], n)))
            r, c = blk.shape
            bias[offsets[i]:offsets[i] + r, offsets[j]:offsets[j] + c] += blk.bias
    return GpeMatrix(tuple(terms), bias)


def materialize(G: Expr) -> np.ndarray:
    """Dense value: terms summed in sequence order, then the bias."""
    if isinstance(G, BlockMatrix):
        return np.block([[materialize(b) for b in row] for row in G.blocks])
    out = np.zeros(G.shape)
    for t in G.terms:
        out += t.materialize()
    return out + G.bias
