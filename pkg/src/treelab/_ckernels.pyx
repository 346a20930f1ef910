# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled split-search kernels.

Mirrors :mod:`treelab._pykernels` function for function; see that module for
the argument conventions. Selection between the two happens in
:mod:`treelab.kernels`.
"""
import numpy as np

from libc.math cimport log2, INFINITY
from libc.stdint cimport int64_t

cdef enum:
    MAX_CLASSES = 256

cdef double TIE_TOL = 1e-12


def contingency(const int64_t[:] codes, const int64_t[:] labels,
                const double[:] weights, Py_ssize_t n_values,
                Py_ssize_t n_classes):
    out = np.zeros((n_values, n_classes), dtype=np.float64)
    cdef double[:, ::1] t = out
    cdef Py_ssize_t i
    cdef int64_t c
    with nogil:
        for i in range(codes.shape[0]):
            c = codes[i]
            if c >= 0:
                t[c, labels[i]] += weights[i]
    return out


def class_totals(const int64_t[:] labels, const double[:] weights,
                 Py_ssize_t n_classes):
    out = np.zeros(n_classes, dtype=np.float64)
    cdef double[::1] t = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(labels.shape[0]):
            t[labels[i]] += weights[i]
    return out


cdef inline double _entropy(const double* counts, Py_ssize_t k) nogil:
    cdef double total = 0.0, h = 0.0, p
    cdef Py_ssize_t j
    for j in range(k):
        total += counts[j]
    if total <= 0.0:
        return 0.0
    for j in range(k):
        p = counts[j] / total
        if p > 0.0:
            h -= p * log2(p)
    return h


cdef inline double _gini(const double* counts, Py_ssize_t k) nogil:
    cdef double total = 0.0, s = 0.0, p
    cdef Py_ssize_t j
    for j in range(k):
        total += counts[j]
    if total <= 0.0:
        return 0.0
    for j in range(k):
        p = counts[j] / total
        s += p * p
    return 1.0 - s


cdef inline double _impurity(const double* counts, Py_ssize_t k, int criterion) nogil:
    if criterion == 0:
        return _entropy(counts, k)
    return _gini(counts, k)


def entropy(const double[::1] counts):
    return _entropy(&counts[0], counts.shape[0])


def gini(const double[::1] counts):
    return _gini(&counts[0], counts.shape[0])


def scan_threshold(const double[:] values, const int64_t[:] labels,
                   const double[:] weights, Py_ssize_t n_classes,
                   int criterion, double min_leaf):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i, j, best = -1
    cdef double total = 0.0, left_w = 0.0, imp, lo = INFINITY
    cdef double left[MAX_CLASSES]
    cdef double right[MAX_CLASSES]
    cdef double tot[MAX_CLASSES]
    if n_classes > MAX_CLASSES:
        raise ValueError("too many classes for the compiled kernel")
    scores = np.full(n, np.inf)
    cdef double[::1] sc = scores
    for j in range(n_classes):
        left[j] = 0.0
        tot[j] = 0.0
    with nogil:
        for i in range(n):
            tot[labels[i]] += weights[i]
            total += weights[i]
        for i in range(n - 1):
            left[labels[i]] += weights[i]
            left_w += weights[i]
            if values[i] >= values[i + 1]:
                continue
            if left_w < min_leaf or total - left_w < min_leaf:
                continue
            for j in range(n_classes):
                right[j] = tot[j] - left[j]
            imp = (left_w / total) * _impurity(left, n_classes, criterion) \
                + ((total - left_w) / total) * _impurity(right, n_classes, criterion)
            sc[i] = imp
            if imp < lo:
                lo = imp
        for i in range(n - 1):
            if lo == INFINITY:
                break
            if sc[i] <= lo + TIE_TOL:
                best = i
                break
    if best < 0:
        return None
    return ((values[best] + values[best + 1]) / 2.0, scores[best])


def best_subset(const double[:, ::1] table, int criterion):
    """Exhaustive bipartition search; row 0 is always on the subset side."""
    cdef Py_ssize_t k = table.shape[0], c = table.shape[1]
    cdef Py_ssize_t mask, r, j, n_masks, best = -1
    cdef double total = 0.0, lw, rw, imp, lo = INFINITY
    cdef double left[MAX_CLASSES]
    cdef double right[MAX_CLASSES]
    cdef double colsum[MAX_CLASSES]
    if k < 2:
        return None
    if c > MAX_CLASSES or k > 62:
        raise ValueError("table too large for the compiled kernel")
    n_masks = <Py_ssize_t>1 << (k - 1)
    scores = np.full(n_masks, np.inf)
    cdef double[::1] sc = scores
    with nogil:
        for j in range(c):
            colsum[j] = 0.0
            for r in range(k):
                colsum[j] += table[r, j]
            total += colsum[j]
        # Bit r-1 of ``mask`` places row r (r >= 1) on the subset side.
        for mask in range(n_masks - 1):
            lw = 0.0
            for j in range(c):
                left[j] = table[0, j]
            for r in range(1, k):
                if (mask >> (r - 1)) & 1:
                    for j in range(c):
                        left[j] += table[r, j]
            for j in range(c):
                lw += left[j]
                right[j] = colsum[j] - left[j]
            rw = total - lw
            if lw <= 0.0 or rw <= 0.0:
                continue
            imp = (lw / total) * _impurity(left, c, criterion) \
                + (rw / total) * _impurity(right, c, criterion)
            sc[mask] = imp
            if imp < lo:
                lo = imp
        for mask in range(n_masks - 1):
            if lo == INFINITY:
                break
            if sc[mask] <= lo + TIE_TOL:
                best = mask
                break
    if best < 0:
        return None
    return ((best << 1) | 1, scores[best])
