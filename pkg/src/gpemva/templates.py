"""
Method catalog.

Each builder turns sample sets and hyperparameters into a :class:`BuiltPencil`
whose two sides are GPEs (or 2x2 block GPEs). The registry ``TEMPLATES``
describes every method: required inputs, hyperparameters and defaults, which
end of the spectrum is informative and whether trivial eigenpairs are dropped.

Conventions
-----------
* Scatter matrices are ``A B^T / N`` over centered samples.
* Pairwise statistics use the Laplacian form ``X L_Q X^T``, which equals
  ``1/2 sum_nm Q_nm (x_n - x_m)(x_n - x_m)^T``.
* Kernel CCA pencils carry a global ``1/N`` factor so that, for the linear
  kernel, coefficient-space solutions map onto primal ones without rescaling.
  Eigenvalues are unaffected. ``K^2 + delta K`` then matches the primal ridge
  ``S_xx + (delta / N) I``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from . import gpe as G
from .data import DataError, LabelSet, PairedDataset, SampleSet, center, scatter, split_complete
from .gpe import GpeMatrix, Pencil
from .graphs import DEFAULT_KNN, classwise_affinity, laplacian, lfda_weights, local_scaling_affinity
from .kernels import GramMatrix, KernelSpec, center_gram, gram
from .linalg import truncated_svd

DEGREE_FLOOR = 1e-12
LLE_REG = 1e-9
TRIVIAL_TOL = 1e-9


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Hyper:
    name: str
    default: Any
    kind: str  # float | int | bool | choice
    lo: Optional[float] = None
    hi: Optional[float] = None
    choices: Tuple[str, ...] = ()
    help: str = ""

    def validate(self, value):
        if value is None:
            if self.default is None:
                return None
            value = self.default
        if self.kind == "bool":
            if isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise TemplateError(f"{self.name} expects a boolean, got {value!r}")
                value = value.lower() in ("true", "1", "yes")
            return bool(value)
        if self.kind == "choice":
            if value not in self.choices:
                raise TemplateError(f"{self.name} must be one of {self.choices}, got {value!r}")
            return value
        try:
            value = int(value) if self.kind == "int" else float(value)
        except (TypeError, ValueError):
            raise TemplateError(f"{self.name} expects {self.kind}, got {value!r}") from None
        if self.kind == "int" and isinstance(value, float):
            raise TemplateError(f"{self.name} expects an integer")
        if (self.lo is not None and value < self.lo) or (self.hi is not None and value > self.hi):
            raise TemplateError(f"{self.name}={value} outside [{self.lo}, {self.hi}]")
        return value

    def to_dict(self):
        d = {"name": self.name, "type": self.kind, "default": self.default}
        if self.lo is not None or self.hi is not None:
            d["range"] = [self.lo, self.hi]
        if self.choices:
            d["choices"] = list(self.choices)
        return d


BETA = Hyper("beta", 0.5, "float", 0.0, 1.0, help="weight of the supervised/paired part")
DELTA = Hyper("delta", 0.1, "float", 0.0, None, help="ridge strength")
GAMMA = Hyper("gamma", 0.1, "float", 0.0, None, help="Laplacian regularization weight")
RANK = Hyper("rank", None, "int", 1, None, help="PCR truncation rank (default: numerical rank)")
KNN = Hyper("knn", DEFAULT_KNN, "int", 1, None, help="neighbour count for local scaling / LLE")
OFF_CLASS = Hyper("off_class_lw", "zero", "choice", choices=("zero", "uniform"),
                  help="within-class weight for cross-class pairs")
KERNEL = (
    Hyper("kernel", "rbf", "choice", choices=("linear", "rbf", "poly")),
    Hyper("kernel_gamma", 1.0, "float", 0.0, None),
    Hyper("kernel_degree", 2, "int", 1, None),
    Hyper("kernel_offset", 1.0, "float", None, None),
    Hyper("center_kernel", True, "bool"),
)


@dataclass(frozen=True)
class TemplateDescriptor:
    name: str
    group: str  # single | paired | composite | kernel | graph
    inputs: Tuple[str, ...]
    hyperparameters: Tuple[Hyper, ...]
    spectrum_end: str = "largest"
    skip_trivial: bool = False
    dual: bool = False
    transductive: bool = False
    objective: str = "rayleigh"
    summary: str = ""

    def validate(self, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Fill defaults and range-check ``params`` against the declaration."""
        params = dict(params or {})
        known = {h.name: h for h in self.hyperparameters}
        unknown = sorted(set(params) - set(known))
        if unknown:
            raise TemplateError(f"{self.name} does not take {', '.join(unknown)}")
        return {name: h.validate(params.get(name)) for name, h in known.items()}

    def to_dict(self):
        return {
            "name": self.name,
            "group": self.group,
            "inputs": list(self.inputs),
            "hyperparameters": [h.to_dict() for h in self.hyperparameters],
            "spectrum_end": self.spectrum_end,
            "skip_trivial": self.skip_trivial,
            "dual": self.dual,
            "transductive": self.transductive,
            "objective": self.objective,
            "summary": self.summary,
        }


def _d(name, group, inputs, hyper=(), **kw):
    return TemplateDescriptor(name, group, tuple(inputs), tuple(hyper), **kw)


TEMPLATES: Dict[str, TemplateDescriptor] = {d.name: d for d in (
    _d("PCA", "single", ["x"], objective="variance", summary="(S_xx, I)"),
    _d("FDA", "single", ["x", "labels"], summary="(S_b, S_w)"),
    _d("LPP", "single", ["x"], [KNN], spectrum_end="smallest", summary="(X L_A X^T, X D_A X^T)"),
    _d("LFDA", "single", ["x", "labels"], [KNN, OFF_CLASS], summary="(S_lb, S_lw)"),
    _d("CCA", "paired", ["x", "y"], objective="correlation", summary="[[0,S_xy],[S_yx,0]] vs diag(S_xx,S_yy)"),
    _d("MLR", "paired", ["x", "y"], objective="correlation", summary="CCA with S_yy -> I"),
    _d("Ridge", "paired", ["x", "y"], [DELTA], objective="correlation", summary="MLR with S_xx + delta I"),
    _d("CCA_L2", "paired", ["x", "y"], [DELTA], objective="correlation", summary="CCA with ridge on both views"),
    _d("PCR", "paired", ["x", "y"], [RANK], objective="correlation", summary="MLR on rank-K reconstruction of X"),
    _d("OPLS", "paired", ["x", "y"], summary="(S_xy S_yx, S_xx)"),
    _d("SELF", "composite", ["x", "labels"], [BETA, KNN, OFF_CLASS],
       summary="beta LFDA(labeled) + (1-beta) PCA(all)"),
    _d("SemiCCA", "composite", ["x", "y"], [BETA, Hyper("literal_incomplete", False, "bool")],
       summary="beta CCA(paired) + (1-beta) PCA(all)"),
    _d("CFDA", "composite", ["x", "y", "labels"], [BETA, KNN, OFF_CLASS, Hyper("local", False, "bool")],
       summary="beta CCA + (1-beta) LFDA on concatenated views"),
    _d("KCCA", "kernel", ["x", "y"], KERNEL, dual=True, objective="correlation", summary="kernel CCA"),
    _d("KCCA_L2", "kernel", ["x", "y"], (DELTA,) + KERNEL, dual=True, objective="correlation",
       summary="kernel CCA, K^2 + delta K"),
    _d("KCCA_LAP", "kernel", ["x", "y"], (GAMMA, KNN) + KERNEL, dual=True, objective="correlation",
       summary="kernel CCA, K^2 + gamma K L K"),
    _d("KSELF", "kernel", ["x", "labels"], (BETA, KNN, OFF_CLASS) + KERNEL, dual=True, summary="kernel SELF"),
    _d("LE", "graph", ["x"], [KNN], spectrum_end="smallest", skip_trivial=True, transductive=True,
       summary="(L, D)"),
    _d("LLE", "graph", ["x"], [KNN], spectrum_end="smallest", skip_trivial=True, transductive=True,
       summary="((I-K)(I-K)^T, I)"),
    _d("SC", "graph", ["x"], [KNN], spectrum_end="smallest", skip_trivial=True, transductive=True,
       summary="(L, D)"),
    _d("NC", "graph", ["x"], [KNN], spectrum_end="smallest", skip_trivial=True, transductive=True,
       summary="(D^-1/2 L D^-1/2, I)"),
)}


def get_template(name: str) -> TemplateDescriptor:
    try:
        return TEMPLATES[name]
    except KeyError:
        raise TemplateError(f"unknown method {name!r}; see `list`") from None


@dataclass(frozen=True)
class BuiltPencil:
    """A pencil plus everything needed to fit and later project samples.

    ``means`` hold the centering vectors per view, ``grams`` the Gram
    matrices of dual templates and ``train`` the raw training samples of
    transductive templates.
    """

    pencil: Pencil
    descriptor: TemplateDescriptor
    params: Dict[str, Any]
    block_partition: Optional[Tuple[int, int]] = None
    means: Dict[str, np.ndarray] = field(default_factory=dict)
    grams: Dict[str, GramMatrix] = field(default_factory=dict)
    train: Optional[np.ndarray] = None

    def materialize(self):
        return self.pencil.materialize()


# -- helpers ----------------------------------------------------------------

def _require_labels(labels, n, name, min_classes=2):
    if labels is None:
        raise TemplateError(f"{name} requires labels")
    if len(labels) != n:
        raise TemplateError(f"{name}: {len(labels)} labels for {n} samples")
    if labels.n_classes < min_classes:
        raise TemplateError(f"{name} needs at least {min_classes} classes, got {labels.n_classes}")


def fda_laplacians(labels: LabelSet):
    """Sample-space matrices with ``X L_b X^T = S_b`` and ``X L_w X^T = S_w``.

    Both identities hold for any translation of ``X`` because each matrix
    annihilates the all-ones vector.
    """
    n = len(labels)
    ones = np.full(n, 1.0 / n)
    Lb = np.zeros((n, n))
    Lw = np.eye(n) / n
    for c, nc in enumerate(labels.class_counts):
        ind = (labels.labels == c).astype(float)
        v = ind / nc - ones
        Lb += (nc / n) * np.outer(v, v)
        Lw -= np.outer(ind, ind) / (n * nc)
    return 0.5 * (Lb + Lb.T), 0.5 * (Lw + Lw.T)


def lfda_scatters(S: SampleSet, labels: LabelSet, knn=DEFAULT_KNN, off_class_lw="zero", affinity=None):
    """``(S_lb, S_lw)`` as Laplacian-form GPEs.

    ``affinity`` overrides the class-wise local-scaling affinity; pass an
    all-ones matrix to remove locality.
    """
    if affinity is None:
        affinity = classwise_affinity(S, labels, knn)
    Q_lb, Q_lw = lfda_weights(affinity, labels, off_class_lw)
    L_lb = laplacian(Q_lb, signed=True).L
    L_lw = laplacian(Q_lw).L
    return GpeMatrix.from_data(S.samples, L_lb), GpeMatrix.from_data(S.samples, L_lw)


def _scatter_plus_ridge(S, delta):
    sc = scatter(S)
    return G.add_gpe(sc, GpeMatrix.from_bias(delta * np.eye(S.dim))) if delta > 0 else sc


def _cca_over(X, Y):
    return G.assemble_block(
        GpeMatrix.zeros(X.dim, X.dim), scatter(X, Y), scatter(Y, X), GpeMatrix.zeros(Y.dim, Y.dim)
    )


def _block_diag(a, b):
    return G.assemble_block(a, GpeMatrix.zeros(a.shape[0], b.shape[1]), GpeMatrix.zeros(b.shape[0], a.shape[1]), b)


def _paired_complete(D: PairedDataset, name):
    if D.n_paired < 2:
        raise TemplateError(f"{name} needs at least 2 paired samples, got {D.n_paired}")
    Xc, Yc, _, _ = split_complete(D)
    return center(Xc), center(Yc)


def _numerical_rank(X):
    s = truncated_svd(X, min(X.shape))[1]
    return int(np.count_nonzero(s))


# -- builders ---------------------------------------------------------------

def build_single_set(method, S: SampleSet, labels: Optional[LabelSet] = None, **params) -> BuiltPencil:
    desc = get_template(method)
    if desc.group != "single":
        raise TemplateError(f"{method} is not a single-set template")
    p = desc.validate(params)
    X = center(S)
    d = X.dim
    if method == "PCA":
        pencil = Pencil(scatter(X), GpeMatrix.identity(d))
    elif method == "FDA":
        _require_labels(labels, X.n, method)
        Lb, Lw = fda_laplacians(labels)
        pencil = Pencil(GpeMatrix.from_data(X.samples, Lb), GpeMatrix.from_data(X.samples, Lw))
    elif method == "LPP":
        aff = local_scaling_affinity(X, p["knn"])
        lp = laplacian(aff.A)
        pencil = Pencil(GpeMatrix.from_data(X.samples, lp.L), GpeMatrix.from_data(X.samples, lp.D))
    else:  # LFDA
        _require_labels(labels, X.n, method)
        lb, lw = lfda_scatters(X, labels, p["knn"], p["off_class_lw"])
        pencil = Pencil(lb, lw)
    return BuiltPencil(pencil, desc, p, means={"x": X.mean})


def build_paired(method, D: PairedDataset, **params) -> BuiltPencil:
    desc = get_template(method)
    if desc.group != "paired":
        raise TemplateError(f"{method} is not a paired template")
    p = desc.validate(params)
    X, Y = _paired_complete(D, method)
    means = {"x": X.mean, "y": Y.mean}
    if method == "OPLS":
        sxy = scatter(X, Y)
        over = G.multiply_gpe(sxy, scatter(Y, X))
        return BuiltPencil(Pencil(over, scatter(X)), desc, p, means=means)
    if method == "PCR":
        rank = _numerical_rank(X.samples)
        K = rank if p["rank"] is None else p["rank"]
        if not 1 <= K <= rank:
            raise TemplateError(f"PCR rank K={K} outside [1, {rank}]")
        U, s, V = truncated_svd(X.samples, K)
        X = SampleSet((U * s) @ V.T, X.mean, True)
    over = _cca_over(X, Y)
    if method == "CCA":
        under = _block_diag(scatter(X), scatter(Y))
    elif method in ("MLR", "PCR"):
        under = _block_diag(scatter(X), GpeMatrix.identity(Y.dim))
    elif method == "Ridge":
        under = _block_diag(_scatter_plus_ridge(X, p["delta"]), GpeMatrix.identity(Y.dim))
    else:  # CCA_L2
        under = _block_diag(_scatter_plus_ridge(X, p["delta"]), _scatter_plus_ridge(Y, p["delta"]))
    return BuiltPencil(Pencil(over, under), desc, p, (X.dim, Y.dim), means)


def build_composite(method, D: PairedDataset = None, S: SampleSet = None,
                    labels: Optional[LabelSet] = None, **params) -> BuiltPencil:
    """SELF takes ``S`` with labels for its leading columns; SemiCCA and CFDA
    take a paired dataset (CFDA also labels for the paired part)."""
    desc = get_template(method)
    if desc.group != "composite":
        raise TemplateError(f"{method} is not a composite template")
    p = desc.validate(params)
    beta = p["beta"]
    if method == "SELF":
        if S is None:
            raise TemplateError("SELF needs a sample set")
        X = center(S)
        n_lab = 0 if labels is None else len(labels)
        if n_lab > X.n:
            raise TemplateError(f"{n_lab} labels for {X.n} samples")
        if beta > 0 and n_lab == 0:
            raise TemplateError("SELF with beta > 0 needs labeled samples")
        pca_over, pca_under = scatter(X), GpeMatrix.identity(X.dim)
        if beta > 0:
            lb, lw = lfda_scatters(X.columns(slice(0, n_lab)), labels, p["knn"], p["off_class_lw"])
        else:
            lb, lw = pca_over, pca_under
        pencil = Pencil(G.convex_combine(lb, pca_over, beta), G.convex_combine(lw, pca_under, beta))
        return BuiltPencil(pencil, desc, p, means={"x": X.mean})

    if D is None:
        raise TemplateError(f"{method} needs a paired dataset")
    if method == "SemiCCA":
        Xa, Ya = center(D.x), center(D.y)
        pca_over = _block_diag(scatter(Xa), scatter(Ya))
        ident = _block_diag(GpeMatrix.identity(Xa.dim), GpeMatrix.identity(Ya.dim))
        if beta > 0:
            Xc, Yc = _paired_complete(D, method)
            over = _cca_over(Xc, Yc)
            if p["literal_incomplete"]:
                _, _, Xi, Yi = split_complete(D)
                if Xi.n == 0 or Yi.n == 0:
                    raise TemplateError("literal_incomplete needs unpaired samples in both views")
                under = _block_diag(scatter(center(Xi)), scatter(center(Yi)))
            else:
                under = _block_diag(scatter(Xc), scatter(Yc))
        else:
            over, under = pca_over, ident
        pencil = Pencil(G.convex_combine(over, pca_over, beta), G.convex_combine(under, ident, beta))
        return BuiltPencil(pencil, desc, p, (Xa.dim, Ya.dim), {"x": Xa.mean, "y": Ya.mean})

    # CFDA
    X, Y = _paired_complete(D, method)
    _require_labels(labels, X.n, method)
    Z = SampleSet(np.vstack([X.samples, Y.samples]), np.concatenate([X.mean, Y.mean]), True)
    if p["local"]:
        aff = classwise_affinity(Z, labels, p["knn"]).A
    else:
        aff = np.ones((Z.n, Z.n)) - np.eye(Z.n)
    lb, lw = lfda_scatters(Z, labels, off_class_lw=p["off_class_lw"], affinity=aff)
    over = G.convex_combine(G.flatten(_cca_over(X, Y)), lb, beta)
    under = G.convex_combine(G.flatten(_block_diag(scatter(X), scatter(Y))), lw, beta)
    return BuiltPencil(Pencil(over, under), desc, p, (X.dim, Y.dim), {"x": X.mean, "y": Y.mean})


def kernel_spec(p) -> KernelSpec:
    return KernelSpec(p["kernel"], p["kernel_gamma"], p["kernel_degree"], p["kernel_offset"])


def _gram(S, p):
    g = gram(S, kernel_spec(p))
    return center_gram(g) if p["center_kernel"] else g


def build_kernelized(method, D: PairedDataset = None, S: SampleSet = None,
                     labels: Optional[LabelSet] = None, **params) -> BuiltPencil:
    """Kernel CCA variants take a paired dataset; KSELF takes ``S`` with labels
    for its leading columns. Pencils live in coefficient space."""
    desc = get_template(method)
    if desc.group != "kernel":
        raise TemplateError(f"{method} is not a kernel template")
    p = desc.validate(params)
    if method == "KSELF":
        if S is None:
            raise TemplateError("KSELF needs a sample set")
        beta = p["beta"]
        gx = _gram(S, p)
        K, n = gx.K, gx.n
        n_lab = 0 if labels is None else len(labels)
        if n_lab > n:
            raise TemplateError(f"{n_lab} labels for {n} samples")
        if beta > 0 and n_lab == 0:
            raise TemplateError("KSELF with beta > 0 needs labeled samples")
        # Laplacian reproducing the total scatter: uniform weights 1/N^2
        L_tot = np.eye(n) / n - np.full((n, n), 1.0 / n**2)
        L_lb = np.zeros((n, n))
        L_lw = np.zeros((n, n))
        if beta > 0:
            Sl = SampleSet(S.samples[:, :n_lab])
            aff = classwise_affinity(Sl, labels, p["knn"])
            Q_lb, Q_lw = lfda_weights(aff, labels, p["off_class_lw"])
            L_lb[:n_lab, :n_lab] = laplacian(Q_lb, signed=True).L
            L_lw[:n_lab, :n_lab] = laplacian(Q_lw).L
        mid = beta * L_lb + (1.0 - beta) * L_tot
        over = GpeMatrix.from_bias(K @ mid @ K)
        under = G.convex_combine(GpeMatrix.from_bias(K @ L_lw @ K), GpeMatrix.from_bias(K), beta)
        over = GpeMatrix.from_bias(0.5 * (over.bias + over.bias.T))
        under = GpeMatrix.from_bias(0.5 * (G.materialize(under) + G.materialize(under).T))
        return BuiltPencil(Pencil(over, under), desc, p, grams={"x": gx})

    if D is None:
        raise TemplateError(f"{method} needs a paired dataset")
    if D.n_paired < 2:
        raise TemplateError(f"{method} needs at least 2 paired samples")
    Xc, Yc, _, _ = split_complete(D)
    gx, gy = _gram(Xc, p), _gram(Yc, p)
    Kx, Ky = gx.K, gy.K
    n = gx.n
    cross = G.multiply_gpe(GpeMatrix.from_bias(Kx), GpeMatrix.from_bias(Ky)).bias
    over = G.assemble_block(
        GpeMatrix.zeros(n, n), GpeMatrix.from_bias(cross / n),
        GpeMatrix.from_bias(cross.T / n), GpeMatrix.zeros(n, n),
    )

    def reg(K, S_view):
        sq = K @ K
        if method == "KCCA_L2":
            sq = sq + p["delta"] * K
        elif method == "KCCA_LAP":
            L = laplacian(local_scaling_affinity(S_view, min(p["knn"], S_view.n - 1)).A).L
            sq = sq + p["gamma"] * (K @ L @ K)
        return GpeMatrix.from_bias(0.5 * (sq + sq.T) / n)

    under = _block_diag(reg(Kx, Xc), reg(Ky, Yc))
    return BuiltPencil(Pencil(over, under), desc, p, (n, n), grams={"x": gx, "y": gy})


def lle_weights(S: SampleSet, k: int) -> np.ndarray:
    """Reconstruction weights, column ``n`` rebuilding ``x_n`` from its ``k``
    nearest neighbours; every column sums to one."""
    X = S.samples
    n = X.shape[1]
    if not 1 <= k <= n - 1:
        raise TemplateError(f"LLE needs 1 <= k <= N-1, got k={k} for N={n}")
    sq = (X * X).sum(axis=0)
    D2 = sq[:, None] + sq[None, :] - 2.0 * X.T @ X
    W = np.zeros((n, n))
    for i in range(n):
        others = np.delete(np.arange(n), i)
        nbrs = others[np.argsort(D2[i, others], kind="stable")[:k]]
        Z = X[:, nbrs] - X[:, [i]]
        C = Z.T @ Z
        tr = np.trace(C)
        if np.linalg.matrix_rank(C) < k:
            C = C + LLE_REG * (tr if tr > 0 else 1.0) * np.eye(k)
        w = np.linalg.solve(C, np.ones(k))
        W[nbrs, i] = w / w.sum()
    return W


def build_graph_embedding(method, S: SampleSet, weights=None, **params) -> BuiltPencil:
    """``weights`` replaces the local-scaling affinity (LE, SC, NC)."""
    desc = get_template(method)
    if desc.group != "graph":
        raise TemplateError(f"{method} is not a graph template")
    p = desc.validate(params)
    X = center(S)
    n = X.n
    if method == "LLE":
        K = lle_weights(X, p["knn"])
        M = np.eye(n) - K
        pencil = Pencil(GpeMatrix.from_bias(M @ M.T), GpeMatrix.identity(n))
    else:
        if weights is None:
            if n < 2:
                raise TemplateError(f"{method} needs at least two samples")
            weights = local_scaling_affinity(X, min(p["knn"], n - 1)).A
        lp = laplacian(weights)
        deg = np.diag(lp.D).copy()
        if np.any(deg < DEGREE_FLOOR):
            deg = np.maximum(deg, DEGREE_FLOOR)
        if method == "NC":
            inv = 1.0 / np.sqrt(deg)
            pencil = Pencil(GpeMatrix.from_bias(inv[:, None] * lp.L * inv[None, :]), GpeMatrix.identity(n))
        else:
            pencil = Pencil(GpeMatrix.from_bias(lp.L), GpeMatrix.from_bias(np.diag(deg)))
    return BuiltPencil(pencil, desc, p, means={"x": X.mean}, train=S.samples.copy())


def build(method, x: SampleSet, y: Optional[SampleSet] = None, labels: Optional[LabelSet] = None,
          n_paired: Optional[int] = None, weights=None, **params) -> BuiltPencil:
    """Dispatch to the builder for ``method``.

    ``x`` and ``y`` are raw (uncentered) sample sets. ``n_paired`` defaults
    to the number of samples both views share.
    """
    desc = get_template(method)
    if "y" in desc.inputs:
        if y is None:
            raise TemplateError(f"{method} requires a second view y")
        if n_paired is None:
            n_paired = min(x.n, y.n)
        try:
            D = PairedDataset(x, y, n_paired)
        except DataError as e:
            raise TemplateError(str(e)) from None
    if desc.group == "single":
        return build_single_set(method, x, labels, **params)
    if desc.group == "paired":
        return build_paired(method, D, **params)
    if desc.group == "composite":
        if method == "SELF":
            return build_composite(method, S=x, labels=labels, **params)
        return build_composite(method, D, labels=labels, **params)
    if desc.group == "kernel":
        if method == "KSELF":
            return build_kernelized(method, S=x, labels=labels, **params)
        return build_kernelized(method, D, **params)
    return build_graph_embedding(method, x, weights=weights, **params)
