"""Command-line interface: ``gpemva {list,fit,transform,eval}``.

Exit codes: 0 success, 1 data or numerical error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .data import LabelSet, SampleSet
from .kernels import center_gram, gram
from .model import SIGN_CONVENTION, FittedModel, fit, objective_eval, transform
from .templates import TEMPLATES, TemplateError, build, get_template, kernel_spec

SCHEMA_VERSION = 1

HYPER_FLAGS = {
    "beta": "beta",
    "delta": "delta",
    "gamma": "gamma",
    "rank": "rank",
    "knn": "knn",
    "kernel": "kernel",
    "kernel_gamma": "kernel_gamma",
    "kernel_degree": "kernel_degree",
    "kernel_offset": "kernel_offset",
}


class UsageError(Exception):
    pass


class DataFailure(Exception):
    pass


def fmt(v):
    return f"{v:.12g}"


# -- CSV -----------------------------------------------------------------------

def read_table(path, header):
    """Return ``(column_names, rows)`` with rows as lists of strings."""
    if not os.path.exists(path):
        raise UsageError(f"file not found: {path}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    names = None
    if header and rows:
        names, rows = [c.strip() for c in rows[0]], rows[1:]
    return names, rows


def to_matrix(rows, path, n_cols=None):
    if not rows:
        return np.zeros((0, n_cols or 0))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataFailure(f"{path}: rows have differing column counts {sorted(widths)}")
    try:
        M = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as e:
        raise DataFailure(f"{path}: non-numeric entry ({e})") from None
    if not np.all(np.isfinite(M)):
        raise DataFailure(f"{path}: non-finite entry")
    return M


def load_features(path, header, label_spec=None):
    """Read a feature CSV; optionally pull out a label column.

    ``label_spec`` may be a path to a one-column file, a column name (with
    ``--header``) or a zero-based column index. Returns ``(X rows, labels)``.
    """
    names, rows = read_table(path, header)
    labels = None
    if label_spec is not None and not os.path.exists(label_spec):
        col = None
        if names is not None and label_spec in names:
            col = names.index(label_spec)
        else:
            try:
                col = int(label_spec)
            except ValueError:
                raise UsageError(f"--labels {label_spec!r} is neither a file nor a column of {path}") from None
        width = len(names) if names is not None else (len(rows[0]) if rows else 0)
        if not 0 <= col < width:
            raise UsageError(f"--labels column {col} out of range for {path}")
        labels = [r[col].strip() for r in rows]
        rows = [r[:col] + r[col + 1:] for r in rows]
        if names is not None:
            names = names[:col] + names[col + 1:]
    elif label_spec is not None:
        _, lrows = read_table(label_spec, header)
        labels = [r[0].strip() if r else "" for r in lrows]
    X = to_matrix(rows, path, len(names) if names is not None else None)
    return X, labels


def label_set(values, n_rows):
    """Labels for the leading rows; trailing empty cells mark unlabeled rows."""
    if values is None:
        return None
    if len(values) > n_rows:
        raise DataFailure(f"{len(values)} labels for {n_rows} samples")
    k = len(values)
    while k and values[k - 1] == "":
        k -= 1
    if any(v == "" for v in values[:k]):
        raise DataFailure("unlabeled rows must come after all labeled rows")
    if k == 0:
        return None
    return LabelSet.from_values(values[:k])


def write_embedding(path, E):
    r, n = E.shape
    lines = [",".join(f"dim_{k + 1}" for k in range(r))]
    lines += [",".join(fmt(v) for v in E[:, j]) for j in range(n)]
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# -- model persistence ---------------------------------------------------------

def model_to_dict(m: FittedModel, n_paired, n_features):
    d = {
        "schema_version": SCHEMA_VERSION,
        "method": m.descriptor.name,
        "hyperparameters": m.params,
        "n_features": n_features,
        "n_paired": n_paired,
        "means": {k: v.tolist() for k, v in sorted(m.means.items())},
        "eigenvalues": m.eigenvalues.tolist(),
        "weights": m.weights.tolist(),
        "vectors": m.vectors.tolist(),
        "W": m.W.tolist(),
        "block_partition": list(m.block_partition) if m.block_partition else None,
        "sign_convention": SIGN_CONVENTION,
        "truncated": bool(m.truncated),
    }
    if m.descriptor.dual:
        d["dual"] = {
            view: {"centered": g.centered, "train": g.train.tolist()} for view, g in sorted(m.grams.items())
        }
    if m.descriptor.transductive:
        d["train"] = m.train.tolist()
    return d


def model_from_dict(d) -> FittedModel:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise DataFailure(f"unsupported model schema_version {d.get('schema_version')!r}")
    desc = get_template(d["method"])
    params = d["hyperparameters"]
    grams = {}
    if desc.dual:
        spec = kernel_spec(params)
        for view, g in d["dual"].items():
            G = gram(SampleSet(np.array(g["train"], dtype=float)), spec)
            grams[view] = center_gram(G) if g["centered"] else G
    vectors = np.array(d["vectors"], dtype=float).reshape(-1, len(d["eigenvalues"]))
    return FittedModel(
        desc, params,
        np.array(d["eigenvalues"], dtype=float),
        vectors,
        np.array(d["weights"], dtype=float),
        tuple(d["block_partition"]) if d["block_partition"] else None,
        {k: np.array(v, dtype=float) for k, v in d["means"].items()},
        grams,
        np.array(d["train"], dtype=float) if "train" in d else None,
        d.get("truncated", False),
    )


def load_model(path):
    if not os.path.exists(path):
        raise UsageError(f"model file not found: {path}")
    try:
        with open(path) as fh:
            d = json.load(fh)
        return model_from_dict(d), d
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise DataFailure(f"{path}: malformed model file ({e})") from None


# -- commands ------------------------------------------------------------------

def cmd_list(args):
    descs = [TEMPLATES[k].to_dict() for k in TEMPLATES]
    if args.format == "json":
        print(json.dumps(descs, indent=2))
        return 0
    print("method\tinputs\tspectrum_end\thyperparameters")
    for d in descs:
        hyp = ", ".join(f"{h['name']}={h['default']}" for h in d["hyperparameters"]) or "-"
        print(f"{d['name']}\t{'+'.join(d['inputs'])}\t{d['spectrum_end']}\t{hyp}")
    return 0


def _collect_params(args, desc):
    given = {}
    for attr, name in HYPER_FLAGS.items():
        v = getattr(args, attr, None)
        if v is not None:
            given[name] = v
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        given[k.strip().replace("-", "_")] = v.strip()
    try:
        return desc.validate(given)
    except TemplateError as e:
        raise UsageError(str(e)) from None


def _load_inputs(args, desc, need_all=True):
    if args.x is None:
        raise UsageError("missing required input --x")
    if "y" in desc.inputs and args.y is None and need_all:
        raise UsageError(f"{desc.name} requires --y (second view)")
    if "labels" in desc.inputs and args.labels is None and need_all:
        raise UsageError(f"{desc.name} requires --labels")
    X, lab = load_features(args.x, args.header, args.labels if "labels" in desc.inputs else None)
    Y = None
    if "y" in desc.inputs and args.y is not None:
        Y, _ = load_features(args.y, args.header)
    labels = label_set(lab, X.shape[0]) if lab is not None else None
    if "labels" in desc.inputs and labels is None and need_all and desc.name not in ("SELF", "KSELF"):
        raise UsageError(f"{desc.name} requires --labels")
    return X, Y, labels


def cmd_fit(args):
    if args.method is None:
        raise UsageError("missing required option --method")
    if args.model is None:
        raise UsageError("missing required option --model (output path)")
    try:
        desc = get_template(args.method)
    except TemplateError as e:
        raise UsageError(str(e)) from None
    params = _collect_params(args, desc)
    X, Y, labels = _load_inputs(args, desc)
    if X.shape[0] == 0:
        raise DataFailure(f"{args.x}: no samples")
    x = SampleSet.from_rows(X)
    y = SampleSet.from_rows(Y) if Y is not None else None
    n_paired = args.paired
    bp = build(desc.name, x, y, labels, n_paired, **params)
    m = fit(bp, args.dim)
    n_features = {"x": int(X.shape[1])}
    if Y is not None:
        n_features["y"] = int(Y.shape[1])
    if y is not None and n_paired is None:
        n_paired = min(x.n, y.n)
    d = model_to_dict(m, n_paired, n_features)
    with open(args.model, "w") as fh:
        json.dump(d, fh, indent=1, sort_keys=True)
        fh.write("\n")
    if args.format == "json":
        print(json.dumps({"method": desc.name, "eigenvalues": [float(fmt(v)) for v in m.eigenvalues],
                          "truncated": m.truncated}))
    else:
        print(f"# method={desc.name} components={m.r}" + (" (truncated)" if m.truncated else ""))
        print("component,eigenvalue")
        for k, v in enumerate(m.eigenvalues, 1):
            print(f"{k},{fmt(v)}")
    return 0


def _read_view(path, header, n_features):
    names, rows = read_table(path, header)
    M = to_matrix(rows, path, len(names) if names is not None else n_features)
    if M.shape[0] and M.shape[1] != n_features:
        raise DataFailure(f"{path}: {M.shape[1]} columns, model expects {n_features}")
    return M


def cmd_transform(args):
    if args.model is None:
        raise UsageError("missing required option --model")
    if args.x is None and args.y is None:
        raise UsageError("transform needs --x and/or --y")
    m, d = load_model(args.model)
    nf = d["n_features"]
    X = _read_view(args.x, args.header, nf["x"]) if args.x is not None else None
    Y = None
    if args.y is not None:
        if "y" not in nf:
            raise UsageError(f"{m.descriptor.name} model has no y view")
        Y = _read_view(args.y, args.header, nf["y"])
    n_rows = (X if X is not None else Y).shape[0]
    if n_rows == 0:
        E = np.zeros((m.r, 0))
    else:
        E = transform(m, None if X is None else X.T, None if Y is None else Y.T)
    write_embedding(args.out, E)
    return 0


def cmd_eval(args):
    if args.model is None:
        raise UsageError("missing required option --model")
    m, d = load_model(args.model)
    desc = m.descriptor
    X, Y, labels = _load_inputs(args, desc)
    if "labels" in desc.inputs and labels is None and desc.name in ("SELF", "KSELF") and m.params.get("beta", 0) > 0:
        raise UsageError(f"{desc.name} evaluation requires --labels")
    x = SampleSet.from_rows(X)
    y = SampleSet.from_rows(Y) if Y is not None else None
    kind, vals = objective_eval(m, x, y, labels, args.paired)
    print(f"component,{kind}")
    for k, v in enumerate(vals, 1):
        print(f"{k},{fmt(v)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gpemva", description="Generalized-eigenproblem multivariate analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_opt = argparse.ArgumentParser(add_help=False)
    fmt_opt.add_argument("--format", choices=["text", "json"], default="text")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--x", help="CSV of samples (rows) by features (columns)")
    data.add_argument("--y", help="CSV of the second view")
    data.add_argument("--labels", help="label file, or column name/index inside --x")
    data.add_argument("--paired", type=int, help="first N rows of x and y are paired")
    data.add_argument("--header", action="store_true", help="CSV files carry one header row")

    hyper = argparse.ArgumentParser(add_help=False)
    hyper.add_argument("--method")
    hyper.add_argument("--dim", type=int, help="number of components")
    hyper.add_argument("--beta", type=float)
    hyper.add_argument("--delta", type=float)
    hyper.add_argument("--gamma", type=float)
    hyper.add_argument("--rank", type=int)
    hyper.add_argument("--knn", type=int)
    hyper.add_argument("--kernel", choices=["linear", "rbf", "poly"])
    hyper.add_argument("--kernel-gamma", dest="kernel_gamma", type=float)
    hyper.add_argument("--kernel-degree", dest="kernel_degree", type=int)
    hyper.add_argument("--kernel-offset", dest="kernel_offset", type=float)
    hyper.add_argument("--set", action="append", metavar="KEY=VALUE", help="other template hyperparameters")

    p = sub.add_parser("list", parents=[fmt_opt], help="show registered templates")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("fit", parents=[fmt_opt, data, hyper], help="fit a template and write a model")
    p.add_argument("--model", "--out", dest="model", help="output model JSON")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", parents=[data], help="embed samples with a fitted model")
    p.add_argument("--model", help="model JSON")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("eval", parents=[fmt_opt, data], help="per-component objective of a model")
    p.add_argument("--model", help="model JSON")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fit" and args.dim is not None and args.dim < 1:
        parser.error("--dim must be >= 1")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"gpemva: error: {e}", file=sys.stderr)
        return 2
    except (DataFailure, ValueError, np.linalg.LinAlgError) as e:
        print(f"gpemva: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
