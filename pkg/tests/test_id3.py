import numpy as np
import pytest

import oracles
from treelab.dataset import Dataset, Instance, generate_synthetic, nominal, numeric
from treelab.errors import InductionError
from treelab.id3 import build_id3
from treelab.metrics import first_best
from treelab.tree import Internal, Leaf, NullLeaf, iter_nodes, node_count, predict


def test_pure_dataset_is_single_leaf():
    schema = (nominal("a", "x", "y"), nominal("c", "p", "f"))
    d = Dataset("t", schema, 1, tuple(Instance((i % 2, 0)) for i in range(6)))
    t = build_id3(d)
    assert isinstance(t.root, Leaf)
    assert t.root.label == 0
    assert node_count(t) == (0, 1)


def test_tennis_root_and_structure(tennis):
    t = build_id3(tennis)
    assert t.root.attr == 0
    overcast = t.root.children[1]
    assert isinstance(overcast, Leaf) and overcast.dist == (4.0, 0.0)
    assert t.root.children[0].attr == 2  # sunny -> humidity
    assert t.root.children[2].attr == 3  # rain -> windy
    assert node_count(t) == (3, 5)


def test_unseen_value_becomes_null_leaf():
    schema = (nominal("a", "x", "y", "z"), nominal("c", "p", "f"))
    d = Dataset("t", schema, 1, tuple(Instance(c) for c in [(0, 0), (0, 0), (1, 1), (1, 1)]))
    t = build_id3(d)
    assert isinstance(t.root.children[2], NullLeaf)
    assert predict(t, (2, None)) is None
    assert predict(t, (0, None)) == 0


@pytest.mark.parametrize(
    "schema, rows, fragment",
    [
        ((numeric("x"), nominal("c", "p", "f")), [(1.0, 0)], "numeric"),
        ((nominal("a", "x"), nominal("c", "p", "f")), [(None, 0)], "missing"),
        ((nominal("a", "x"), nominal("c", "p", "f")), [], "empty"),
    ],
)
def test_rejected_inputs(schema, rows, fragment):
    d = Dataset("t", schema, 1, tuple(Instance(r) for r in rows))
    with pytest.raises(InductionError, match=fragment):
        build_id3(d)


def _paths(node, seen=()):
    if isinstance(node, Internal):
        assert node.attr not in seen
        for child in node.children:
            yield from _paths(child, seen + (node.attr,))
    else:
        yield seen


@pytest.mark.parametrize("seed", range(40))
def test_attribute_once_per_path(seed):
    d = oracles.random_nominal_dataset(np.random.default_rng(seed))
    for path in _paths(build_id3(d).root):
        assert len(path) <= d.class_index


@pytest.mark.parametrize("seed", range(40))
def test_fits_consistent_data_exactly(seed):
    d = oracles.random_consistent_dataset(np.random.default_rng(seed))
    t = build_id3(d)
    for inst in d.instances:
        assert predict(t, inst) == inst.cells[d.class_index]


@pytest.mark.parametrize("seed", range(40))
def test_root_maximises_gain(seed):
    d = oracles.random_nominal_dataset(np.random.default_rng(seed), weights=bool(seed % 2))
    t = build_id3(d)
    if not isinstance(t.root, Internal):
        return
    gains = [oracles.info_gain(d, a) for a in range(d.class_index)]
    if max(gains) > 1e-9:
        assert gains[t.root.attr] == pytest.approx(max(gains), abs=1e-9)
        assert t.root.attr == first_best(gains, tol=1e-9)


def test_parity_is_split_despite_zero_gain():
    schema = (nominal("a", "0", "1"), nominal("b", "0", "1"), nominal("c", "even", "odd"))
    rows = [Instance((a, b, (a + b) % 2)) for a in (0, 1) for b in (0, 1)]
    t = build_id3(Dataset("xor", schema, 2, tuple(rows)))
    assert all(predict(t, r) == r.cells[2] for r in rows)


def test_leaf_weights_cover_training_set():
    d = generate_synthetic(3, 90)
    t = build_id3(d)
    leaves = [n for n in iter_nodes(t.root) if isinstance(n, Leaf)]
    assert sum(l.n for l in leaves) == pytest.approx(90.0)


def test_inconsistent_duplicates_end_in_majority_leaf():
    schema = (nominal("a", "x"), nominal("c", "p", "f"))
    d = Dataset("t", schema, 1, tuple(Instance((0, c)) for c in (1, 1, 0)))
    t = build_id3(d)
    assert isinstance(t.root, Leaf) and t.root.label == 1
