"""C4.5 induction with gain-ratio selection and pessimistic pruning.

Numeric attributes get binary ``<=``/``>`` threshold splits and stay
available deeper in the tree. Instances with a missing test value are sent
down every branch with their weight scaled by the share of present training
weight that branch received.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaincinv

from . import kernels
from .dataset import Dataset
from .errors import InductionError
from .metrics import first_best, ratio, table_gain, table_split_info
from .outcomes import GT, LE, Equals
from .tree import Algorithm, DecisionTree, Internal, Leaf, iter_nodes, majority

GAIN_TOL = 1e-12


@dataclass(frozen=True)
class C45Config:
    confidence_factor: float = 0.25
    min_leaf_weight: float = 2.0
    prune: bool = True

    def __post_init__(self):
        if not 0 < self.confidence_factor <= 0.5:
            raise ValueError("confidence factor must lie in (0, 0.5]")
        if self.min_leaf_weight < 0:
            raise ValueError("min_leaf_weight must be non-negative")


def best_threshold(d: Dataset, attr: int, min_leaf: float = 0.0) -> tuple[float, float]:
    """Midpoint threshold on a numeric attribute maximizing information gain.

    Returns ``(threshold, gain)``; ties go to the smaller threshold.
    """
    spec = d.schema[attr]
    if attr == d.class_index or spec.is_nominal:
        raise ValueError(f"{spec.name!r} is not a numeric input attribute")
    X, y, w = d.arrays
    col = X[:, attr]
    mask = ~np.isnan(col)
    vals, ys, ws = col[mask], y[mask], w[mask]
    if len(np.unique(vals)) < 2:
        raise ValueError(f"{spec.name!r} needs at least two distinct values")
    found = _threshold(vals, ys, ws, d.n_classes, min_leaf)
    if found is None:
        raise ValueError("no admissible threshold")
    thr, table = found
    return thr, table_gain(table)


def _threshold(vals, ys, ws, k, min_leaf):
    order = np.argsort(vals, kind="stable")
    vals, ys, ws = vals[order], ys[order], ws[order]
    found = kernels.scan_threshold(vals, ys, ws, k, kernels.ENTROPY, float(min_leaf))
    if found is None:
        return None
    thr = found[0]
    side = (vals > thr).astype(np.int64)
    return thr, kernels.contingency(side, ys, ws, 2, k)


def pessimistic_upper_error(e: float, n: float, cf: float) -> float:
    """Upper confidence limit on the error count of a leaf.

    ``n`` times the error rate ``p`` at which observing ``e`` or fewer errors
    out of ``n`` has probability ``cf``. Non-integer ``e`` and ``n`` (from
    fractional instance weights) use the continuous beta form.
    """
    if not n > 0:
        raise ValueError("n must be positive")
    if not 0 <= e <= n + 1e-9:
        raise ValueError(f"need 0 <= e <= n, got e={e}, n={n}")
    if not 0 < cf < 1:
        raise ValueError("confidence factor must lie in (0, 1)")
    if e >= n:
        return float(n)
    return float(n * betaincinv(e + 1.0, n - e, 1.0 - cf))


def _leaf_bound(dist, cf):
    n = float(sum(dist))
    if n <= 0:
        return 0.0
    return pessimistic_upper_error(n - max(dist), n, cf)


def build_c45(d: Dataset, cfg: C45Config | None = None) -> DecisionTree:
    cfg = cfg or C45Config()
    if len(d) == 0:
        raise InductionError("cannot build a tree from an empty dataset")
    X, y, w = d.arrays
    k = d.n_classes
    nominal = [spec.is_nominal for spec in d.schema]
    cards = [spec.cardinality for spec in d.schema]
    attrs = [a for a in range(len(d.schema)) if a != d.class_index]
    min_leaf = cfg.min_leaf_weight

    def candidate(rows, wts, a, total):
        col = X[rows, a]
        present = ~np.isnan(col)
        pw = wts[present].sum()
        if pw <= 0:
            return None
        ys, ws = y[rows][present], wts[present]
        if nominal[a]:
            table = kernels.contingency(col[present].astype(np.int64), ys, ws, cards[a], k)
            sizes = table.sum(axis=1)
            if np.count_nonzero(sizes >= max(min_leaf, 1e-12)) < 2:
                return None
            thr = None
        else:
            found = _threshold(col[present], ys, ws, k, min_leaf)
            if found is None:
                return None
            thr, table = found
        gain = (pw / total) * table_gain(table)
        return a, gain, table_split_info(table), table, thr

    def grow(rows, wts, used):
        dist = kernels.class_totals(y[rows], wts, k)
        total = float(dist.sum())
        label = majority(dist)
        leaf = Leaf(label, tuple(dist.tolist()))
        if np.count_nonzero(dist) <= 1 or total < 2 * min_leaf:
            return leaf
        cands = [c for a in attrs if a not in used if (c := candidate(rows, wts, a, total))]
        if not cands:
            return leaf
        mean_gain = sum(c[1] for c in cands) / len(cands)
        eligible = [c for c in cands if c[1] > GAIN_TOL and c[1] >= mean_gain - GAIN_TOL]
        if not eligible:
            return leaf
        pick = first_best([ratio(c[1], c[2]) for c in eligible])
        a, _, _, table, thr = eligible[pick]
        branch_w = table.sum(axis=1)
        present_total = branch_w.sum()
        col = X[rows, a]
        missing = np.isnan(col)
        if thr is None:
            outcomes = [Equals(v) for v in range(cards[a])]
            branch_of = np.where(missing, -1, np.nan_to_num(col, nan=-1)).astype(np.int64)
            next_used = used | {a}
        else:
            outcomes = [LE(thr), GT(thr)]
            branch_of = np.where(missing, -1, (col > thr).astype(np.int64))
            next_used = used
        branches = []
        for b, outcome in enumerate(outcomes):
            share = branch_w[b] / present_total
            take = (branch_of == b) | (missing & (share > 0))
            sub_rows = rows[take]
            sub_wts = np.where(missing[take], wts[take] * share, wts[take])
            if len(sub_rows) == 0:
                child = Leaf(label, tuple(0.0 for _ in range(k)))
            else:
                child = grow(sub_rows, sub_wts, next_used)
            branches.append((outcome, child))
        return Internal(a, tuple(branches), leaf.dist, tuple(branch_w.tolist()))

    root = grow(np.arange(len(d)), w.copy(), frozenset())
    tree = DecisionTree(root, d.schema, d.class_index, Algorithm.C45)
    if cfg.prune:
        tree = prune_pessimistic(tree, cfg)
    return tree


def subtree_bound(node, cf: float) -> float:
    """Sum of pessimistic error bounds over the leaves below ``node``."""
    return sum(
        _leaf_bound(leaf.dist, cf) for leaf in iter_nodes(node) if isinstance(leaf, Leaf)
    )


def prune_pessimistic(tree: DecisionTree, cfg: C45Config | None = None) -> DecisionTree:
    """Bottom-up replacement of subtrees by leaves whenever the leaf's
    pessimistic error bound does not exceed the subtree's."""
    cf = (cfg or C45Config()).confidence_factor

    def prune(node):
        if not isinstance(node, Internal):
            return node
        branches = tuple((o, prune(c)) for o, c in node.branches)
        node = Internal(node.attr, branches, node.dist, node.branch_weights)
        if _leaf_bound(node.dist, cf) <= subtree_bound(node, cf) + 1e-12:
            return Leaf(majority(node.dist), node.dist)
        return node

    return DecisionTree(prune(tree.root), tree.schema, tree.class_index, tree.algorithm)


def distribute(tree: DecisionTree, x, weight: float | None = None):
    """Leaves reached by ``x`` and the share of its weight arriving at each.

    Follows the same fractional rule used during training. Returns a list of
    ``(path, weight)`` where ``path`` is the tuple of branch indices taken.
    """
    cells = x.cells if hasattr(x, "cells") else tuple(x)
    if weight is None:
        weight = getattr(x, "weight", 1.0)
    out = []

    def walk(node, path, wt):
        if not isinstance(node, Internal):
            out.append((path, wt))
            return
        value = cells[node.attr]
        if value is None:
            total = float(sum(node.branch_weights))
            for i, ((_, child), bw) in enumerate(zip(node.branches, node.branch_weights)):
                share = bw / total if total > 0 else 1.0 / len(node.branches)
                if share > 0:
                    walk(child, path + (i,), wt * share)
            return
        for i, (outcome, child) in enumerate(node.branches):
            if outcome.matches(value):
                walk(child, path + (i,), wt)
                return
        out.append((path, wt))

    walk(tree.root, (), float(weight))
    return out

