"""Impurity and split-quality measures (logarithms are base 2).

The dataset-level functions (``info_gain``, ``split_info`` ...) evaluate the
natural split of an attribute: one branch per value for nominal attributes,
the best midpoint threshold for numeric ones. Instances whose value for the
attribute is missing are left out. The ``table_*`` helpers work directly on
a value-by-class weight table and are what the inducers call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .dataset import Dataset


@dataclass(frozen=True)
class ClassDistribution:
    weights: tuple[float, ...]

    def __post_init__(self):
        ws = tuple(float(x) for x in self.weights)
        if any(x < 0 for x in ws):
            raise ValueError("class weights must be non-negative")
        object.__setattr__(self, "weights", ws)

    @property
    def total(self) -> float:
        return float(sum(self.weights))

    @classmethod
    def of(cls, d: Dataset) -> "ClassDistribution":
        _, y, w = d.arrays
        return cls(tuple(kernels.class_totals(y, w, d.n_classes)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype or np.float64)


def _counts(dist) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(dist, dtype=np.float64))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("class distribution must be a non-empty vector")
    if arr.sum() <= 0:
        raise ValueError("empty class distribution")
    return arr


def entropy(dist) -> float:
    return float(kernels.entropy(_counts(dist)))


def gini(dist) -> float:
    return float(kernels.gini(_counts(dist)))


# -- table helpers -----------------------------------------------------------


def table_gain(table: np.ndarray) -> float:
    """Information gain of the split whose branch-by-class weights are ``table``."""
    total = table.sum()
    if total <= 0:
        return 0.0
    parent = np.ascontiguousarray(table.sum(axis=0))
    child = 0.0
    for row in table:
        rw = row.sum()
        if rw > 0:
            child += (rw / total) * kernels.entropy(np.ascontiguousarray(row))
    return float(kernels.entropy(parent) - child)


def table_split_info(table: np.ndarray) -> float:
    sizes = np.ascontiguousarray(table.sum(axis=1))
    if sizes.sum() <= 0:
        return 0.0
    return float(kernels.entropy(sizes))


def table_gini_split(table: np.ndarray) -> float:
    total = table.sum()
    out = 0.0
    for row in table:
        rw = row.sum()
        if rw > 0:
            out += (rw / total) * kernels.gini(np.ascontiguousarray(row))
    return float(out)


def ratio(gain: float, split: float) -> float:
    return gain / split if split > 0 else 0.0


# -- dataset-level measures --------------------------------------------------


def _present(d: Dataset, attr: int):
    if attr == d.class_index:
        raise ValueError("attribute is the class attribute")
    X, y, w = d.arrays
    col = X[:, attr]
    mask = ~np.isnan(col)
    if not mask.any():
        raise ValueError(f"attribute {d.schema[attr].name!r} has no present values")
    return col[mask], y[mask], w[mask]


def split_table(d: Dataset, attr: int) -> np.ndarray:
    """Branch-by-class weight table for the attribute's natural split."""
    col, y, w = _present(d, attr)
    spec = d.schema[attr]
    if spec.is_nominal:
        return kernels.contingency(col.astype(np.int64), y, w, spec.cardinality, d.n_classes)
    order = np.argsort(col, kind="stable")
    col, y, w = col[order], y[order], w[order]
    found = kernels.scan_threshold(col, y, w, d.n_classes, kernels.ENTROPY, 0.0)
    codes = np.zeros(len(col), dtype=np.int64)
    if found is not None:
        codes[col > found[0]] = 1
    return kernels.contingency(codes, y, w, 2, d.n_classes)


def info_gain(d: Dataset, attr: int) -> float:
    return table_gain(split_table(d, attr))


def split_info(d: Dataset, attr: int) -> float:
    return table_split_info(split_table(d, attr))


def gain_ratio(d: Dataset, attr: int) -> float:
    table = split_table(d, attr)
    return ratio(table_gain(table), table_split_info(table))


def gini_of_split(d: Dataset, left: Dataset, right: Dataset) -> float:
    # d is unused; kept for a uniform signature.
    lw, rw = left.total_weight, right.total_weight
    if lw + rw <= 0:
        raise ValueError("both sides of the split are empty")
    out = 0.0
    for side, sw in ((left, lw), (right, rw)):
        if sw > 0:
            out += sw / (lw + rw) * gini(ClassDistribution.of(side))
    return out


def first_best(scores: Sequence[float], maximize: bool = True, tol: float = 1e-12):
    """Index of the first score within ``tol`` of the optimum, or None."""
    best = None
    for s in scores:
        if s is None:
            continue
        if best is None or (s > best if maximize else s < best):
            best = s
    if best is None:
        return None
    for i, s in enumerate(scores):
        if s is not None and (s >= best - tol if maximize else s <= best + tol):
            return i
    return None
