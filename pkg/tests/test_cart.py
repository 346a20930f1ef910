import numpy as np
import pytest

import oracles
from treelab.cart import (
    CartConfig,
    best_binary_split,
    build_cart,
    cost_complexity_sequence,
    greedy_subset,
    grow_cart,
)
from treelab.dataset import STUDENT_SCHEMA, Dataset, Instance, generate_synthetic, nominal, numeric
from treelab.outcomes import GT, LE, InSubset
from treelab.tree import Internal, Leaf, iter_nodes, node_count, predict, to_json

GROW = CartConfig(prune=False)


def _binary_everywhere(node):
    return all(len(n.branches) == 2 for n in iter_nodes(node) if isinstance(n, Internal))


@pytest.mark.parametrize("seed", range(10))
def test_every_split_is_binary(seed):
    rng = np.random.default_rng(seed)
    for d in (generate_synthetic(seed, 90), oracles.random_mixed_dataset(rng, n=40)):
        t = build_cart(d)
        assert _binary_everywhere(t.root)
        assert t.root.binary if isinstance(t.root, Internal) else True


@pytest.mark.parametrize("seed", range(60))
def test_subset_search_is_optimal(seed):
    rng = np.random.default_rng(seed)
    d = oracles.random_nominal_dataset(rng, n=int(rng.integers(4, 40)), max_card=7, weights=bool(seed % 3))
    for a in range(d.class_index):
        if len(oracles.groups(d, a)) < 2:
            with pytest.raises(ValueError):
                best_binary_split(d, a)
            continue
        (left, right), score = best_binary_split(d, a)
        assert score == pytest.approx(oracles.best_bipartition(d, a), abs=1e-9)
        assert left.values.isdisjoint(right.values)
        assert left.values | right.values == frozenset(range(d.schema[a].cardinality))


@pytest.mark.parametrize("seed", range(3))
def test_subset_search_at_exhaustive_limit(seed):
    rng = np.random.default_rng(100 + seed)
    schema = (nominal("a", *[f"v{i}" for i in range(12)]), nominal("c", "p", "q", "r"))
    rows = [Instance((i % 12, int(rng.integers(3)))) for i in range(72)]
    d = Dataset("wide", schema, 1, tuple(rows))
    _, score = best_binary_split(d, 0)
    assert score == pytest.approx(oracles.best_bipartition(d, 0), abs=1e-9)


def test_ssg_grades_grouped():
    ssg = [s.name for s in STUDENT_SCHEMA].index("SSG")
    result = len(STUDENT_SCHEMA) - 1
    rows = []
    for g in range(7):
        for j in range(6):
            cells = [0 if s.is_nominal else None for s in STUDENT_SCHEMA]
            cells[ssg] = g
            cells[result] = 0 if g < 2 else (1 if j % 2 else 2)
            rows.append(Instance(tuple(cells)))
    d = Dataset("ssg", STUDENT_SCHEMA, result, tuple(rows))
    (left, right), score = best_binary_split(d, ssg)
    assert left == InSubset(frozenset({0, 1}))
    assert right == InSubset(frozenset(range(2, 7)))
    t = build_cart(d, GROW)
    assert t.root.attr == ssg
    assert isinstance(t.root.children[0], Leaf) and t.root.children[0].label == 0


def test_numeric_split():
    schema = (numeric("x"), nominal("c", "a", "b"))
    d = Dataset("n", schema, 1, tuple(Instance((float(v), int(v >= 3))) for v in range(6)))
    (left, right), score = best_binary_split(d, 0)
    assert (left, right) == (LE(2.5), GT(2.5))
    assert score == 0.0


def test_greedy_path_above_limit():
    card = 14
    schema = (nominal("a", *[f"v{i}" for i in range(card)]), nominal("c", "p", "q"))
    rows = [Instance((v, int(v % 3 == 0))) for v in range(card) for _ in range(3)]
    d = Dataset("g", schema, 1, tuple(rows))
    (left, right), score = best_binary_split(d, 0)
    assert score == pytest.approx(0.0, abs=1e-12)
    assert {v for v in range(card) if v % 3 == 0} in (set(left.values), set(right.values))
    exhaustive = best_binary_split(d, 0, CartConfig(max_exhaustive_values=16))[1]
    assert exhaustive == pytest.approx(score, abs=1e-12)


def test_greedy_subset_stops_without_improvement():
    table = np.array([[2.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    chosen, score = greedy_subset(table)
    assert chosen == frozenset({0})
    assert score == pytest.approx(oracles.gini([2, 0]) * 2 / 6 + oracles.gini([1, 3]) * 4 / 6)


def test_missing_goes_to_heavier_side():
    schema = (nominal("a", "x", "y"), nominal("c", "p", "f"))
    rows = [(0, 0)] * 5 + [(1, 1)] * 2 + [(None, 1)]
    d = Dataset("m", schema, 1, tuple(Instance(r) for r in rows))
    t = grow_cart(d, CartConfig(prune=False, min_leaf_weight=1.0))
    left, right = t.root.children
    assert t.root.branch_weights == (5.0, 2.0)
    assert left.dist == (5.0, 1.0)
    assert predict(t, (None, None)) == 0


def _sizes(seq):
    return [sum(1 for n in iter_nodes(root) if isinstance(n, Internal)) for _, root in seq]


@pytest.mark.parametrize("seed", range(15))
def test_alpha_sequence(seed):
    d = generate_synthetic(seed, 90)
    grown = grow_cart(d, GROW)
    seq = cost_complexity_sequence(grown.root, d.total_weight)
    alphas = [a for a, _ in seq]
    assert alphas[0] == 0.0
    assert all(a < b for a, b in zip(alphas, alphas[1:]))
    assert isinstance(seq[-1][1], Leaf)
    sizes = _sizes(seq)
    assert all(a > b for a, b in zip(sizes, sizes[1:]))


def _node_paths(node, prefix=()):
    yield prefix, node.attr if isinstance(node, Internal) else None
    if isinstance(node, Internal):
        for i, c in enumerate(node.children):
            yield from _node_paths(c, prefix + (i,))


@pytest.mark.parametrize("seed", range(10))
def test_pruned_tree_is_a_subtree(seed):
    d = generate_synthetic(seed, 90)
    grown = grow_cart(d, GROW)
    pruned = build_cart(d)
    full = dict(_node_paths(grown.root))
    for path, attr in _node_paths(pruned.root):
        assert path in full
        if attr is not None:
            assert full[path] == attr
    assert node_count(pruned)[0] <= node_count(grown)[0]


def test_noise_attribute_is_pruned_away():
    rng = np.random.default_rng(7)
    schema = (nominal("signal", "a", "b"), nominal("noise", "w", "x", "y", "z"), nominal("c", "p", "q"))
    rows = []
    for _ in range(200):
        s = int(rng.integers(2))
        label = s if rng.random() > 0.1 else 1 - s
        rows.append(Instance((s, int(rng.integers(4)), label)))
    d = Dataset("noisy", schema, 2, tuple(rows))
    grown = grow_cart(d, GROW)
    assert any(n.attr == 1 for n in iter_nodes(grown.root) if isinstance(n, Internal))
    pruned = build_cart(d)
    assert pruned.root.attr == 0
    assert node_count(pruned) == (1, 2)


def test_deterministic():
    d = generate_synthetic(11, 90)
    assert to_json(build_cart(d)) == to_json(build_cart(d))
    assert to_json(build_cart(d, CartConfig(seed=3))) == to_json(build_cart(d, CartConfig(seed=3)))


def test_one_se_rule_never_grows_tree():
    for seed in range(8):
        d = generate_synthetic(seed, 90)
        with_rule = node_count(build_cart(d))[0]
        without = node_count(build_cart(d, CartConfig(one_se_rule=False)))[0]
        assert with_rule <= without


def test_pure_and_tiny_inputs():
    schema = (nominal("a", "x", "y"), nominal("c", "p", "f"))
    pure = Dataset("p", schema, 1, tuple(Instance((i % 2, 1)) for i in range(5)))
    assert isinstance(build_cart(pure).root, Leaf)
    one = Dataset("o", schema, 1, (Instance((0, 0)),))
    assert build_cart(one).root.label == 0


def test_config_validation():
    with pytest.raises(ValueError):
        CartConfig(internal_folds=1)
    with pytest.raises(ValueError):
        CartConfig(max_exhaustive_values=1)
    with pytest.raises(ValueError):
        CartConfig(min_leaf_weight=-0.5)
