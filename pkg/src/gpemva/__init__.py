"""Multivariate analysis as generalized eigenproblems over pairwise expressions."""
from .data import LabelSet, PairedDataset, SampleSet
from .model import FittedModel, fit, objective_eval, transform
from .templates import TEMPLATES, BuiltPencil, build

__all__ = [
    "SampleSet",
    "PairedDataset",
    "LabelSet",
    "TEMPLATES",
    "BuiltPencil",
    "build",
    "FittedModel",
    "fit",
    "transform",
    "objective_eval",
]

__version__ = "0.1.0"
