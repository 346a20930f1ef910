"""ID3: multiway splits on nominal attributes chosen by information gain.

No pruning. A value that no training instance reaches becomes a
:class:`~treelab.tree.NullLeaf`, so instances routed there are reported as
unclassified.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .dataset import Dataset
from .errors import InductionError
from .metrics import first_best, table_gain
from .outcomes import Equals
from .tree import Algorithm, DecisionTree, Internal, Leaf, NullLeaf, majority

GAIN_TOL = 1e-12


def _check(d: Dataset):
    if len(d) == 0:
        raise InductionError("cannot build a tree from an empty dataset")
    for i, spec in enumerate(d.schema):
        if i != d.class_index and not spec.is_nominal:
            raise InductionError(
                f"ID3 needs nominal attributes; {spec.name!r} is numeric (bin it first)"
            )
    X, _, _ = d.arrays
    if np.isnan(X).any():
        raise InductionError("ID3 does not accept missing values")


def build_id3(d: Dataset) -> DecisionTree:
    _check(d)
    X, y, w = d.arrays
    codes = X.astype(np.int64)
    k = d.n_classes
    cards = [spec.cardinality for spec in d.schema]

    def grow(rows, available):
        dist = kernels.class_totals(y[rows], w[rows], k)
        label = majority(dist)
        leaf = Leaf(label, tuple(dist.tolist()))
        if np.count_nonzero(dist) <= 1 or not available:
            return leaf
        tables = [kernels.contingency(codes[rows, a], y[rows], w[rows], cards[a], k) for a in available]
        gains = [table_gain(t) for t in tables]
        pick = first_best(gains)
        if gains[pick] <= GAIN_TOL:
            # Zero-gain nodes can still be separable (parity-like data); split
            # on the first attribute that partitions the node at all.
            separating = [i for i, t in enumerate(tables) if np.count_nonzero(t.sum(axis=1)) >= 2]
            if not separating:
                return leaf
            pick = separating[0]
        attr = available[pick]
        rest = [a for a in available if a != attr]
        col = codes[rows, attr]
        branches = []
        for v in range(cards[attr]):
            sub = rows[col == v]
            branches.append((Equals(v), grow(sub, rest) if len(sub) else NullLeaf()))
        return Internal(
            attr=attr,
            branches=tuple(branches),
            dist=leaf.dist,
            branch_weights=tuple(tables[pick].sum(axis=1).tolist()),
        )

    attrs = [a for a in range(len(d.schema)) if a != d.class_index]
    root = grow(np.arange(len(d)), attrs)
    return DecisionTree(root, d.schema, d.class_index, Algorithm.ID3)
