"""Pure-Python/numpy split-search kernels.

These are the reference implementations of the hot loops; the compiled
module ``treelab._ckernels`` exposes the same functions with the same
signatures. Conventions:

* ``codes`` are nominal value indices as int64, ``-1`` marks a missing cell.
* ``labels`` are class indices as int64, ``weights`` are float64.
* ``criterion`` is 0 for entropy (bits) and 1 for Gini.
* Split searches return the *weighted child impurity* (lower is better) and
  break ties towards the first candidate within ``TIE_TOL`` of the minimum.
"""

import math

import numpy as np

TIE_TOL = 1e-12


def contingency(codes, labels, weights, n_values, n_classes):
    out = np.zeros((n_values, n_classes), dtype=np.float64)
    present = codes >= 0
    np.add.at(out, (codes[present], labels[present]), weights[present])
    return out


def class_totals(labels, weights, n_classes):
    out = np.zeros(n_classes, dtype=np.float64)
    np.add.at(out, labels, weights)
    return out


def entropy(counts):
    total = 0.0
    for c in counts:
        total += c
    if total <= 0.0:
        return 0.0
    h = 0.0
    for c in counts:
        p = c / total
        if p > 0.0:
            h -= p * math.log2(p)
    return h


def gini(counts):
    total = 0.0
    for c in counts:
        total += c
    if total <= 0.0:
        return 0.0
    s = 0.0
    for c in counts:
        p = c / total
        s += p * p
    return 1.0 - s


def _impurity(counts, criterion):
    return entropy(counts) if criterion == 0 else gini(counts)


def scan_threshold(values, labels, weights, n_classes, criterion, min_leaf):
    """Best midpoint threshold over ``values`` (sorted ascending).

    Returns ``(threshold, weighted_child_impurity)`` or ``None`` when no
    admissible cut exists.
    """
    n = len(values)
    if n < 2:
        return None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), labels] = weights
    left = np.cumsum(onehot, axis=0)
    tot = left[-1]
    left_w = np.cumsum(weights)
    total = left_w[-1]
    if total <= 0.0:
        return None
    scores = np.full(n, np.inf)
    for i in range(n - 1):
        if values[i] >= values[i + 1]:
            continue
        lw = left_w[i]
        if lw < min_leaf or total - lw < min_leaf:
            continue
        scores[i] = (lw / total) * _impurity(left[i], criterion) + (
            (total - lw) / total
        ) * _impurity(tot - left[i], criterion)
    lo = scores.min()
    if not np.isfinite(lo):
        return None
    best = int(np.flatnonzero(scores <= lo + TIE_TOL)[0])
    return ((values[best] + values[best + 1]) / 2.0, float(scores[best]))


def best_subset(table, criterion):
    """Exhaustive bipartition search over the rows of ``table``.

    Row 0 is always on the subset side, so each of the ``2**(k-1) - 1``
    nontrivial bipartitions is visited once. Returns ``(mask, impurity)``
    where bit ``r`` of ``mask`` places row ``r`` in the subset.
    """
    k, c = table.shape
    if k < 2:
        return None
    colsum = np.zeros(c)
    for r in range(k):
        colsum = colsum + table[r]
    total = float(colsum.sum())
    n_masks = 1 << (k - 1)
    scores = np.full(n_masks, np.inf)
    for mask in range(n_masks - 1):
        left = table[0].copy()
        for r in range(1, k):
            if (mask >> (r - 1)) & 1:
                left = left + table[r]
        lw = float(left.sum())
        right = colsum - left
        rw = total - lw
        if lw <= 0.0 or rw <= 0.0:
            continue
        scores[mask] = (lw / total) * _impurity(left, criterion) + (
            rw / total
        ) * _impurity(right, criterion)
    lo = scores.min()
    if not np.isfinite(lo):
        return None
    best = int(np.flatnonzero(scores <= lo + TIE_TOL)[0])
    return ((best << 1) | 1, float(scores[best]))
