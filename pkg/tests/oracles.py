"""Brute-force reference computations.

Everything here works on plain Python lists and dicts and shares no code
with the package's kernels, so agreement is meaningful.
"""

import itertools
import math
from collections import defaultdict

import numpy as np

from treelab.dataset import Dataset, Instance, nominal, numeric


def entropy(counts):
    total = sum(counts)
    return -sum(c / total * math.log2(c / total) for c in counts if c > 0)


def gini(counts):
    total = sum(counts)
    return 1.0 - sum((c / total) ** 2 for c in counts)


def class_counts(pairs, n_classes):
    """pairs: iterable of (label, weight)."""
    out = [0.0] * n_classes
    for label, weight in pairs:
        out[label] += weight
    return out


def groups(d: Dataset, attr: int):
    """value -> list of (label, weight) over instances with attr present."""
    out = defaultdict(list)
    for inst in d.instances:
        v = inst.cells[attr]
        if v is not None:
            out[v].append((inst.cells[d.class_index], inst.weight))
    return out


def info_gain(d: Dataset, attr: int):
    g = groups(d, attr)
    everything = [p for ps in g.values() for p in ps]
    total = sum(w for _, w in everything)
    parent = entropy(class_counts(everything, d.n_classes))
    child = sum(
        sum(w for _, w in ps) / total * entropy(class_counts(ps, d.n_classes)) for ps in g.values()
    )
    return parent - child


def split_info(d: Dataset, attr: int):
    g = groups(d, attr)
    return entropy([sum(w for _, w in ps) for ps in g.values()])


def gain_ratio(d: Dataset, attr: int):
    si = split_info(d, attr)
    return info_gain(d, attr) / si if si > 0 else 0.0


def binomial_tail(e, n, p):
    return sum(math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(e + 1))


def upper_error(e, n, cf, iters=200):
    """n * p where P[Bin(n, p) <= e] = cf, by bisection on p."""
    if e >= n:
        return float(n)
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if binomial_tail(e, n, mid) > cf:
            lo = mid
        else:
            hi = mid
    return n * (lo + hi) / 2


def best_bipartition(d: Dataset, attr: int):
    """Minimal split Gini over every nontrivial bipartition of present values."""
    g = groups(d, attr)
    values = sorted(g)
    total = sum(w for ps in g.values() for _, w in ps)
    best = math.inf
    for r in range(1, len(values)):
        for left in itertools.combinations(values, r):
            lp = [p for v in left for p in g[v]]
            rp = [p for v in values if v not in left for p in g[v]]
            lw = sum(w for _, w in lp)
            rw = sum(w for _, w in rp)
            s = lw / total * gini(class_counts(lp, d.n_classes)) + rw / total * gini(
                class_counts(rp, d.n_classes)
            )
            best = min(best, s)
    return best


def best_threshold_gain(values, labels, n_classes):
    """Brute-force gain over all midpoints; returns (threshold, gain) with
    the smallest threshold among ties."""
    pairs = list(zip(values, labels))
    distinct = sorted(set(values))
    parent = entropy(class_counts([(y, 1.0) for _, y in pairs], n_classes))
    best = None
    for a, b in zip(distinct, distinct[1:]):
        t = (a + b) / 2
        left = [(y, 1.0) for v, y in pairs if v <= t]
        right = [(y, 1.0) for v, y in pairs if v > t]
        n = len(pairs)
        gain = parent - len(left) / n * entropy(class_counts(left, n_classes)) - len(right) / n * entropy(
            class_counts(right, n_classes)
        )
        if best is None or gain > best[1] + 1e-12:
            best = (t, gain)
    return best


def random_nominal_dataset(rng, n=None, n_attrs=None, n_classes=None, max_card=4, weights=False):
    n = n or int(rng.integers(2, 31))
    n_attrs = n_attrs or int(rng.integers(1, 7))
    n_classes = n_classes or int(rng.integers(2, 4))
    cards = [int(rng.integers(1, max_card + 1)) for _ in range(n_attrs)]
    schema = [nominal(f"a{j}", *[f"v{i}" for i in range(c)]) for j, c in enumerate(cards)]
    schema.append(nominal("cls", *[f"c{i}" for i in range(n_classes)]))
    rows = []
    for _ in range(n):
        cells = tuple(int(rng.integers(c)) for c in cards) + (int(rng.integers(n_classes)),)
        w = float(rng.uniform(0.5, 3.0)) if weights else 1.0
        rows.append(Instance(cells, w))
    return Dataset("random", tuple(schema), n_attrs, tuple(rows))


def random_consistent_dataset(rng):
    """Random nominal data whose class is a deterministic function of the
    attribute vector, so a perfect fit exists."""
    d = random_nominal_dataset(rng)
    table = {}
    rows = []
    for inst in d.instances:
        key = inst.cells[:-1]
        label = table.setdefault(key, inst.cells[-1])
        rows.append(Instance(key + (label,)))
    return d.with_instances(rows)


def random_mixed_dataset(rng, n=None, missing_rate=0.15):
    n = n or int(rng.integers(6, 41))
    n_nom = int(rng.integers(0, 4))
    n_num = int(rng.integers(1, 3))
    schema = [nominal(f"n{j}", "x", "y", "z") for j in range(n_nom)]
    schema += [numeric(f"r{j}") for j in range(n_num)]
    schema.append(nominal("cls", "p", "q", "r"))
    rows = []
    for _ in range(n):
        cells = [int(rng.integers(3)) for _ in range(n_nom)]
        cells += [float(np.round(rng.normal(), 1)) for _ in range(n_num)]
        cells = [None if rng.random() < missing_rate else c for c in cells]
        cells.append(int(rng.integers(3)))
        rows.append(Instance(tuple(cells), float(rng.choice([1.0, 1.0, 0.5, 2.0]))))
    return Dataset("mixed", tuple(schema), len(schema) - 1, tuple(rows))
