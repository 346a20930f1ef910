"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times each kernel on fixed random inputs, then each inducer end to end on a
seeded 90-row synthetic dataset with the backend swapped in place.
"""

import argparse
import timeit
from contextlib import contextmanager

import numpy as np

from treelab import _pykernels, kernels
from treelab.dataset import generate_synthetic
from treelab.evaluation import cross_validate, induce

try:
    from treelab import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("contingency", "class_totals", "entropy", "gini", "scan_threshold", "best_subset")


@contextmanager
def backend(mod):
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(kernels, n, getattr(mod, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def kernel_cases():
    rng = np.random.default_rng(0)
    n, k = 2000, 3
    labels = rng.integers(0, k, size=n).astype(np.int64)
    weights = rng.choice([1.0, 0.5, 2.0], size=n)
    codes = rng.integers(-1, 7, size=n).astype(np.int64)
    values = np.sort(rng.normal(size=n))
    counts = rng.uniform(0, 10, size=k)
    table = np.ascontiguousarray(rng.integers(0, 20, size=(10, k)).astype(float))
    return {
        "contingency": lambda m: m.contingency(codes, labels, weights, 7, k),
        "class_totals": lambda m: m.class_totals(labels, weights, k),
        "entropy": lambda m: m.entropy(counts),
        "gini": lambda m: m.gini(counts),
        "scan_threshold": lambda m: m.scan_threshold(values, labels, weights, k, 0, 2.0),
        "best_subset(10 values)": lambda m: m.best_subset(table, 1),
    }


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return
    mods = {"python": _pykernels, "cython": _ckernels}

    print(f"{'kernel':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, case in kernel_cases().items():
        number = 20 if name.startswith(("scan", "best")) else 200
        t = {b: best_of(lambda: case(m), args.repeat, number) for b, m in mods.items()}
        print(f"{name:<24}{t['python'] * 1e6:>10.1f}us{t['cython'] * 1e6:>10.1f}us{t['python'] / t['cython']:>9.1f}x")

    d = generate_synthetic(1, 90)
    print()
    print(f"{'inducer (90x17)':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
    jobs = {algo: (lambda a=algo: induce(a, d)) for algo in ("id3", "c45", "cart")}
    jobs["cart 10-fold CV"] = lambda: cross_validate("cart", d, k=10, seed=1)
    for name, job in jobs.items():
        t = {}
        for b, m in mods.items():
            with backend(m):
                t[b] = best_of(job, args.repeat, 1)
        print(f"{name:<24}{t['python'] * 1e3:>10.1f}ms{t['cython'] * 1e3:>10.1f}ms{t['python'] / t['cython']:>9.1f}x")


if __name__ == "__main__":
    main()
