"""Stratified k-fold cross-validation and the accuracy/time/rate report."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from .c45 import C45Config, build_c45
from .cart import CartConfig, build_cart
from .dataset import Dataset
from .id3 import build_id3
from .tree import Algorithm, DecisionTree, predict


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: tuple[int, ...]
    seed: int

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f != fold]

    def sizes(self) -> list[int]:
        return np.bincount(self.assignment, minlength=self.k).tolist()


def stratified_folds(d: Dataset, k: int, seed: int, stratify: bool = True) -> FoldPlan:
    """Shuffle each class with ``seed`` and deal instances round-robin.

    A single counter runs across the classes, so overall fold sizes as well
    as per-class counts differ by at most one.
    """
    n = len(d)
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= {n}, got k={k}")
    rng = np.random.default_rng(seed)
    _, y, _ = d.arrays
    if stratify:
        groups = [np.flatnonzero(y == c) for c in range(d.n_classes)]
    else:
        groups = [np.arange(n)]
    order = np.concatenate([rng.permutation(g) for g in groups])
    assignment = np.empty(n, dtype=np.int64)
    assignment[order] = np.arange(n) % k
    return FoldPlan(k, tuple(int(a) for a in assignment), seed)


def make_config(algorithm: Algorithm, **options):
    """Algorithm config from keyword options; unknown keys are ignored."""
    algorithm = Algorithm.parse(algorithm)
    if algorithm is Algorithm.C45:
        fields = C45Config.__dataclass_fields__
        return C45Config(**{k: v for k, v in options.items() if k in fields and v is not None})
    if algorithm is Algorithm.CART:
        fields = CartConfig.__dataclass_fields__
        return CartConfig(**{k: v for k, v in options.items() if k in fields and v is not None})
    return None


def induce(algorithm, d: Dataset, config=None) -> DecisionTree:
    algorithm = Algorithm.parse(algorithm)
    if algorithm is Algorithm.ID3:
        return build_id3(d)
    if algorithm is Algorithm.C45:
        return build_c45(d, config)
    return build_cart(d, config)


@dataclass(frozen=True)
class ClassRate:
    label: str
    tp_rate: float | None
    fp_rate: float | None


@dataclass(frozen=True)
class EvaluationReport:
    algorithm: str
    k: int
    seed: int
    class_labels: tuple[str, ...]
    # Rows are actual classes; columns are predicted classes followed by an
    # "Unclassified" column.
    confusion: tuple[tuple[float, ...], ...]
    correct_pct: float
    incorrect_pct: float
    unclassified_pct: float
    per_class: tuple[ClassRate, ...]
    build_time: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["confusion"] = [list(r) for r in self.confusion]
        out["class_labels"] = list(self.class_labels)
        out["per_class"] = [asdict(r) for r in self.per_class]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def class_rates(confusion) -> list[tuple[float | None, float | None]]:
    """Per-class ``(tp_rate, fp_rate)`` from a confusion matrix.

    ``confusion`` has one row per actual class; its first ``C`` columns are
    predicted classes and any further column holds unclassified weight, which
    counts as a miss for the actual class and as a prediction of nothing.
    ``None`` marks a zero denominator.
    """
    m = np.asarray(confusion, dtype=float)
    c = m.shape[0]
    actual = m.sum(axis=1)
    out = []
    for j in range(c):
        tp = m[j, j]
        fp = m[:, j].sum() - tp
        negatives = actual.sum() - actual[j]
        tp_rate = tp / actual[j] if actual[j] > 0 else None
        fp_rate = fp / negatives if negatives > 0 else None
        out.append((tp_rate, fp_rate))
    return out


def report_from_confusion(algorithm, k, seed, labels, confusion, build_time) -> EvaluationReport:
    m = np.asarray(confusion, dtype=float)
    c = len(labels)
    total = m.sum()
    correct = float(np.trace(m[:, :c]))
    unclassified = float(m[:, c:].sum())
    incorrect = total - correct - unclassified
    rates = class_rates(m)
    return EvaluationReport(
        algorithm=Algorithm.parse(algorithm).value,
        k=k,
        seed=seed,
        class_labels=tuple(labels),
        confusion=tuple(tuple(float(x) for x in row) for row in m),
        correct_pct=100.0 * correct / total,
        incorrect_pct=100.0 * incorrect / total,
        unclassified_pct=100.0 * unclassified / total,
        per_class=tuple(ClassRate(lab, tp, fp) for lab, (tp, fp) in zip(labels, rates)),
        build_time=build_time,
    )


def cross_validate(algorithm, d: Dataset, k: int = 10, seed: int = 1, config=None, stratify: bool = True):
    """k-fold cross-validation; every held-out prediction lands in one matrix.

    ``build_time`` is the summed wall time of the k training calls.
    """
    algorithm = Algorithm.parse(algorithm)
    plan = stratified_folds(d, k, seed, stratify)
    c = d.n_classes
    confusion = np.zeros((c, c + 1))
    build_time = 0.0
    for f in range(k):
        train = d.subset(plan.train_indices(f))
        start = time.perf_counter()
        tree = induce(algorithm, train, config)
        build_time += time.perf_counter() - start
        for i in plan.test_indices(f):
            inst = d.instances[i]
            pred = predict(tree, inst)
            confusion[inst.cells[d.class_index], c if pred is None else pred] += inst.weight
    return report_from_confusion(algorithm, k, seed, d.class_values, confusion, build_time)


def _rate(x):
    return "—" if x is None else f"{x:.3f}"


def render_report(r: EvaluationReport) -> str:
    labels = list(r.class_labels)
    width = max([len(s) for s in labels] + [12])
    lines = [
        f"=== {r.algorithm} | {r.k}-fold cross-validation | seed {r.seed} ===",
        "",
        "CLASSIFIERS ACCURACY",
        f"{'Correctly Classified Instances':<34}{r.correct_pct:>10.4f}%",
        f"{'Incorrectly Classified Instances':<34}{r.incorrect_pct:>10.4f}%",
        f"{'Unclassified Instances':<34}{r.unclassified_pct:>10.4f}%",
        "",
        "EXECUTION TIME TO BUILD THE MODEL",
        f"{'Execution Time (Sec)':<34}{r.build_time:>10.2f}",
        "",
        "CLASS-WISE ACCURACY",
        f"{'Class':<{width}}  {'TP Rate':>7}  {'FP Rate':>7}",
    ]
    for rate in r.per_class:
        lines.append(f"{rate.label:<{width}}  {_rate(rate.tp_rate):>7}  {_rate(rate.fp_rate):>7}")
    lines += ["", "CONFUSION MATRIX (rows = actual)"]
    cols = labels + ["Unclassified"]
    cw = max(len(s) for s in cols) + 2
    lines.append(" " * width + "".join(f"{s:>{cw}}" for s in cols))
    for label, row in zip(labels, r.confusion):
        lines.append(f"{label:<{width}}" + "".join(f"{_cell(x):>{cw}}" for x in row))
    return "\n".join(lines) + "\n"


def _cell(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2f}"
