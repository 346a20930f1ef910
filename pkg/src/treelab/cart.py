"""CART classification trees: binary Gini splits and cost-complexity pruning.

Nominal attributes split into a value subset and its complement; numeric
attributes split at a midpoint threshold. During growth an instance whose
split value is missing joins the heavier side. Pruning follows the
weakest-link subtree sequence and picks a member of it by internal
cross-validation, optionally with the one-standard-error rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataset import Dataset
from .errors import InductionError
from .metrics import first_best
from .outcomes import GT, LE, InSubset
from .tree import Algorithm, DecisionTree, Internal, Leaf, majority, predict

GAIN_TOL = 1e-12


@dataclass(frozen=True)
class CartConfig:
    internal_folds: int = 5
    one_se_rule: bool = True
    min_leaf_weight: float = 2.0
    max_exhaustive_values: int = 12
    seed: int = 1
    prune: bool = True

    def __post_init__(self):
        if self.internal_folds < 2:
            raise ValueError("internal_folds must be at least 2")
        if self.max_exhaustive_values < 2:
            raise ValueError("max_exhaustive_values must be at least 2")
        if self.min_leaf_weight < 0:
            raise ValueError("min_leaf_weight must be non-negative")


# ---------------------------------------------------------------------------
# Split search


def _split_gini(left, right):
    lw, rw = left.sum(), right.sum()
    total = lw + rw
    return (lw / total) * kernels.gini(np.ascontiguousarray(left)) + (rw / total) * kernels.gini(
        np.ascontiguousarray(right)
    )


def greedy_subset(table: np.ndarray):
    """Forward selection of a value subset; used above the exhaustive limit.

    Starting from the empty set, repeatedly add the value that lowers the
    split Gini most, stopping when no addition improves it.
    """
    k = table.shape[0]
    colsum = table.sum(axis=0)
    chosen: list[int] = []
    left = np.zeros(table.shape[1])
    best = math.inf
    while len(chosen) < k - 1:
        scores = []
        for r in range(k):
            if r in chosen:
                scores.append(None)
                continue
            cand = left + table[r]
            scores.append(_split_gini(cand, colsum - cand))
        pick = first_best(scores, maximize=False)
        if pick is None or (chosen and scores[pick] >= best - GAIN_TOL):
            break
        best = scores[pick]
        chosen.append(pick)
        left = left + table[pick]
    return frozenset(chosen), best


def _nominal_split(table: np.ndarray, max_exhaustive: int):
    """Best (subset of value indices, split Gini) for a value-by-class table."""
    present = np.flatnonzero(table.sum(axis=1) > 0)
    if len(present) < 2:
        return None
    sub = np.ascontiguousarray(table[present])
    if len(present) <= max_exhaustive:
        found = kernels.best_subset(sub, kernels.GINI)
        if found is None:
            return None
        mask, score = found
        chosen = frozenset(int(present[r]) for r in range(len(present)) if mask >> r & 1)
        return chosen, score
    rows, score = greedy_subset(sub)
    return frozenset(int(present[r]) for r in rows), score


def _numeric_split(vals, ys, ws, k):
    order = np.argsort(vals, kind="stable")
    return kernels.scan_threshold(vals[order], ys[order], ws[order], k, kernels.GINI, 0.0)


def _attribute_split(spec, col, y, w, k, max_exhaustive):
    """``(left outcome, right outcome, split Gini, present mask, goes-left mask)``."""
    present = ~np.isnan(col)
    if not present.any():
        return None
    vals, ys, ws = col[present], y[present], w[present]
    if spec.is_nominal:
        table = kernels.contingency(vals.astype(np.int64), ys, ws, spec.cardinality, k)
        found = _nominal_split(table, max_exhaustive)
        if found is None:
            return None
        subset, score = found
        outcomes = (InSubset(subset), InSubset(frozenset(range(spec.cardinality)) - subset))
        goes_left = np.isin(np.nan_to_num(col, nan=-1).astype(np.int64), list(subset))
    else:
        found = _numeric_split(vals, ys, ws, k)
        if found is None:
            return None
        thr, score = found
        outcomes = (LE(thr), GT(thr))
        goes_left = col <= thr
    return outcomes[0], outcomes[1], float(score), present, goes_left


def best_binary_split(d: Dataset, attr: int, cfg: CartConfig | None = None):
    """Best bipartition of one attribute: ``((left, right), split_gini)``."""
    cfg = cfg or CartConfig()
    if attr == d.class_index:
        raise ValueError("attribute is the class attribute")
    X, y, w = d.arrays
    found = _attribute_split(d.schema[attr], X[:, attr], y, w, d.n_classes, cfg.max_exhaustive_values)
    if found is None:
        raise ValueError(f"{d.schema[attr].name!r} has fewer than two distinct present values")
    left, right, score, _, _ = found
    return (left, right), score


# ---------------------------------------------------------------------------
# Growth


def grow_cart(d: Dataset, cfg: CartConfig) -> DecisionTree:
    if len(d) == 0:
        raise InductionError("cannot build a tree from an empty dataset")
    X, y, w = d.arrays
    k = d.n_classes
    attrs = [a for a in range(len(d.schema)) if a != d.class_index]
    min_leaf = cfg.min_leaf_weight

    def grow(rows):
        ys, ws = y[rows], w[rows]
        dist = kernels.class_totals(ys, ws, k)
        leaf = Leaf(majority(dist), tuple(dist.tolist()))
        if np.count_nonzero(dist) <= 1 or dist.sum() < 2 * min_leaf:
            return leaf
        found = []
        for a in attrs:
            split = _attribute_split(d.schema[a], X[rows, a], ys, ws, k, cfg.max_exhaustive_values)
            if split is None:
                found.append(None)
                continue
            present = split[3]
            parent = kernels.gini(kernels.class_totals(ys[present], ws[present], k))
            found.append(split if parent - split[2] > GAIN_TOL else None)
        pick = first_best([None if s is None else s[2] for s in found], maximize=False)
        if pick is None:
            return leaf
        left_o, right_o, _, present, goes_left = found[pick]
        lw = ws[present & goes_left].sum()
        rw = ws[present & ~goes_left].sum()
        to_left = np.where(present, goes_left, lw >= rw)
        return Internal(
            attr=attrs[pick],
            branches=((left_o, grow(rows[to_left])), (right_o, grow(rows[~to_left]))),
            dist=leaf.dist,
            branch_weights=(float(lw), float(rw)),
        )

    return DecisionTree(grow(np.arange(len(d))), d.schema, d.class_index, Algorithm.CART)


def build_cart(d: Dataset, cfg: CartConfig | None = None) -> DecisionTree:
    cfg = cfg or CartConfig()
    tree = grow_cart(d, cfg)
    if cfg.prune:
        tree = prune_cost_complexity(tree, d, cfg)
    return tree


# ---------------------------------------------------------------------------
# Cost-complexity pruning


def _node_error(node) -> float:
    return float(sum(node.dist) - max(node.dist))


def _subtree_stats(node):
    """(resubstitution error weight, leaf count) of the subtree at ``node``."""
    if not isinstance(node, Internal):
        return _node_error(node), 1
    err, leaves = 0.0, 0
    for child in node.children:
        e, n = _subtree_stats(child)
        err += e
        leaves += n
    return err, leaves


def _link_strengths(root, scale):
    out = []

    def walk(node):
        if not isinstance(node, Internal):
            return _node_error(node), 1
        err, leaves = 0.0, 0
        for child in node.children:
            e, n = walk(child)
            err += e
            leaves += n
        out.append((_node_error(node) - err) / scale / (leaves - 1))
        return err, leaves

    walk(root)
    return out


def _collapse(node, alpha, scale, tol=1e-12):
    """Collapse every internal node whose link strength is <= ``alpha``.

    Strengths are measured on the tree as given, so tied weakest links are
    removed together.
    """
    if not isinstance(node, Internal):
        return node
    err, leaves = _subtree_stats(node)
    g = (_node_error(node) - err) / scale / (leaves - 1)
    if g <= alpha + tol:
        return Leaf(majority(node.dist), node.dist)
    children = tuple((o, _collapse(c, alpha, scale, tol)) for o, c in node.branches)
    return Internal(node.attr, children, node.dist, node.branch_weights)


def cost_complexity_sequence(root, total_weight: float | None = None):
    """Weakest-link pruning sequence ``[(alpha, root), ...]``.

    The first entry is the smallest subtree with the same training error as
    ``root`` (alpha 0); alphas then strictly increase and the last entry is
    the root collapsed to a single leaf. Alphas are per unit of training
    weight.
    """
    scale = total_weight or float(sum(root.dist))
    tree = root
    while isinstance(tree, Internal) and min(_link_strengths(tree, scale)) <= 1e-12:
        tree = _collapse(tree, 0.0, scale)
    seq = [(0.0, tree)]
    while isinstance(tree, Internal):
        alpha = min(_link_strengths(tree, scale))
        tree = _collapse(tree, alpha, scale)
        if alpha <= seq[-1][0] + 1e-12:
            seq[-1] = (seq[-1][0], tree)
        else:
            seq.append((alpha, tree))
    return seq


def _pick(seq, beta):
    idx = 0
    for i, (alpha, _) in enumerate(seq):
        if alpha <= beta + 1e-12:
            idx = i
    return seq[idx][1]


def cv_errors(tree: DecisionTree, d: Dataset, cfg: CartConfig):
    """Sequence, cross-validated error rate and standard error per member."""
    from .evaluation import stratified_folds

    total = d.total_weight
    seq = cost_complexity_sequence(tree.root, total)
    folds = min(cfg.internal_folds, len(d))
    errors = np.zeros(len(seq))
    if folds < 2:
        return seq, None, None
    alphas = [a for a, _ in seq]
    betas = [math.sqrt(alphas[i] * alphas[i + 1]) for i in range(len(alphas) - 1)] + [math.inf]
    plan = stratified_folds(d, folds, cfg.seed)
    grow_cfg = CartConfig(
        internal_folds=cfg.internal_folds,
        one_se_rule=cfg.one_se_rule,
        min_leaf_weight=cfg.min_leaf_weight,
        max_exhaustive_values=cfg.max_exhaustive_values,
        seed=cfg.seed,
        prune=False,
    )
    for f in range(folds):
        train = d.subset(plan.train_indices(f))
        test = d.subset(plan.test_indices(f))
        sub = grow_cart(train, grow_cfg)
        sub_seq = cost_complexity_sequence(sub.root, train.total_weight)
        for i, beta in enumerate(betas):
            candidate = DecisionTree(_pick(sub_seq, beta), d.schema, d.class_index, Algorithm.CART)
            for inst in test.instances:
                if predict(candidate, inst) != inst.cells[d.class_index]:
                    errors[i] += inst.weight
    rate = errors / total
    se = np.sqrt(rate * (1.0 - rate) / total)
    return seq, rate, se


def prune_cost_complexity(tree: DecisionTree, d: Dataset, cfg: CartConfig | None = None) -> DecisionTree:
    cfg = cfg or CartConfig()
    if not isinstance(tree.root, Internal):
        return tree
    seq, rate, se = cv_errors(tree, d, cfg)
    if rate is None:
        chosen = 0
    else:
        best = int(np.argmin(rate))
        chosen = best
        if cfg.one_se_rule:
            limit = rate[best] + se[best] + 1e-12
            chosen = max(i for i in range(len(seq)) if rate[i] <= limit)
    return DecisionTree(seq[chosen][1], tree.schema, tree.class_index, tree.algorithm)
