"""Decision-tree structure, prediction, rule rendering and JSON persistence."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .dataset import AttributeSpec, Dataset, Instance
from .errors import ModelFormatError, SchemaMismatchError
from .outcomes import GT, LE, Equals, InSubset

FORMAT_NAME = "treelab-tree"
FORMAT_VERSION = 1


class Algorithm(str, Enum):
    ID3 = "ID3"
    C45 = "C45"
    CART = "CART"

    @classmethod
    def parse(cls, name) -> "Algorithm":
        if isinstance(name, cls):
            return name
        key = str(name).upper().replace(".", "")
        if key == "J48":
            key = "C45"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown algorithm {name!r}") from None


@dataclass(frozen=True)
class Leaf:
    """Class leaf. ``dist`` holds the training weight per class that reached it."""

    label: int
    dist: tuple[float, ...]

    @property
    def n(self) -> float:
        return float(sum(self.dist))

    @property
    def e(self) -> float:
        return self.n - float(self.dist[self.label])


@dataclass(frozen=True)
class NullLeaf:
    """Branch that saw no training instances; predicts nothing."""


@dataclass(frozen=True)
class Internal:
    attr: int
    branches: tuple  # ((outcome, node), ...)
    dist: tuple[float, ...]
    # Training weight with a present value that followed each branch; used to
    # route instances whose test value is missing.
    branch_weights: tuple[float, ...]

    @property
    def children(self):
        return tuple(child for _, child in self.branches)

    @property
    def binary(self) -> bool:
        return len(self.branches) == 2


Node = Union[Leaf, NullLeaf, Internal]


def majority(dist) -> int:
    """Index of the heaviest class, lowest index on ties."""
    return int(np.argmax(np.asarray(dist)))


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    schema: tuple[AttributeSpec, ...]
    class_index: int
    algorithm: Algorithm

    @property
    def class_values(self) -> tuple[str, ...]:
        return self.schema[self.class_index].values

    def predict(self, x) -> int | None:
        return predict(self, x)

    def render(self) -> str:
        return render_rules(self)

    def node_count(self) -> tuple[int, int]:
        return node_count(self)


# ---------------------------------------------------------------------------
# Prediction


def _cells(x):
    return x.cells if isinstance(x, Instance) else tuple(x)


def _follow(node: Internal, value):
    for outcome, child in node.branches:
        if outcome.matches(value):
            return child
    return None


def class_probabilities(tree: DecisionTree, x) -> np.ndarray:
    """Class probability vector with missing test values spread over all
    branches in proportion to their training weight. A zero vector means
    no leaf with a class was reached."""
    cells = _cells(x)
    k = tree.schema[tree.class_index].cardinality

    def walk(node):
        if isinstance(node, NullLeaf):
            return np.zeros(k)
        if isinstance(node, Leaf):
            n = node.n
            if n > 0:
                return np.asarray(node.dist, dtype=float) / n
            out = np.zeros(k)
            out[node.label] = 1.0
            return out
        value = cells[node.attr]
        if value is None:
            total = float(sum(node.branch_weights))
            out = np.zeros(k)
            for (_, child), bw in zip(node.branches, node.branch_weights):
                frac = bw / total if total > 0 else 1.0 / len(node.branches)
                if frac > 0:
                    out += frac * walk(child)
            return out
        child = _follow(node, value)
        return np.zeros(k) if child is None else walk(child)

    return walk(tree.root)


def predict(tree: DecisionTree, x) -> int | None:
    """Class index for ``x`` (an :class:`Instance` or a cell sequence), or
    ``None`` when the instance is unclassified.

    A missing value at a test node is handled per algorithm: ID3 gives up,
    C4.5 blends all branches by training weight, CART follows the branch
    that carried the most training weight.
    """
    cells = _cells(x)
    if len(cells) != len(tree.schema):
        raise ValueError(f"instance has {len(cells)} cells, tree expects {len(tree.schema)}")
    if tree.algorithm is Algorithm.C45:
        probs = class_probabilities(tree, cells)
        return None if probs.sum() <= 0 else majority(probs)
    node = tree.root
    while isinstance(node, Internal):
        value = cells[node.attr]
        if value is None:
            if tree.algorithm is Algorithm.ID3:
                return None
            node = node.children[majority(node.branch_weights)]
            continue
        node = _follow(node, value)
        if node is None:
            return None
    if isinstance(node, NullLeaf):
        return None
    return node.label


# ---------------------------------------------------------------------------
# Rendering


def _num(x: float) -> str:
    return repr(float(x))


def _values_text(spec: AttributeSpec, values) -> str:
    return "/".join(f"({spec.values[v]})" for v in sorted(values))


def _outcome_text(tree: DecisionTree, node: Internal, i: int) -> str:
    spec = tree.schema[node.attr]
    outcome = node.branches[i][0]
    cart = tree.algorithm is Algorithm.CART
    if isinstance(outcome, Equals):
        sep = "=" if cart else " = "
        return f"{spec.name}{sep}{spec.values[outcome.value]}"
    if isinstance(outcome, InSubset):
        if cart and i == 1 and isinstance(node.branches[0][0], InSubset):
            return f"{spec.name}!={_values_text(spec, node.branches[0][0].values)}"
        sep = "=" if cart else " = "
        return f"{spec.name}{sep}{_values_text(spec, outcome.values)}"
    if not isinstance(outcome, (LE, GT)):
        raise TypeError(f"unknown outcome {outcome!r}")
    op = "<=" if isinstance(outcome, LE) else ">"
    return f"{spec.name}{op}{_num(outcome.threshold)}" if cart else f"{spec.name} {op} {_num(outcome.threshold)}"


def _leaf_text(tree: DecisionTree, node) -> str:
    if isinstance(node, NullLeaf):
        return "null"
    label = tree.class_values[node.label]
    if tree.algorithm is Algorithm.CART:
        return f"{label}({node.n:.1f}/{node.e:.1f})"
    return label


def render_rules(tree: DecisionTree) -> str:
    """Indented text rendering, one line per arc, ``| `` per depth level."""
    lines: list[str] = []

    def walk(node: Internal, depth: int):
        for i, (_, child) in enumerate(node.branches):
            head = "| " * depth + _outcome_text(tree, node, i)
            if isinstance(child, Internal):
                lines.append(head)
                walk(child, depth + 1)
            else:
                lines.append(f"{head}: {_leaf_text(tree, child)}")

    if isinstance(tree.root, Internal):
        walk(tree.root, 0)
    else:
        lines.append(f": {_leaf_text(tree, tree.root)}")
    return "\n".join(lines) + "\n"


def iter_nodes(node: Node):
    yield node
    if isinstance(node, Internal):
        for child in node.children:
            yield from iter_nodes(child)


def node_count(tree: DecisionTree) -> tuple[int, int]:
    internal = leaves = 0
    for node in iter_nodes(tree.root):
        if isinstance(node, Internal):
            internal += 1
        else:
            leaves += 1
    return internal, leaves


# ---------------------------------------------------------------------------
# JSON persistence


def _schema_doc(schema, class_index):
    return {
        "attributes": [
            {"name": s.name, "type": s.kind, **({"values": list(s.values)} if s.is_nominal else {})}
            for s in schema
        ],
        "class_index": class_index,
    }


def schema_hash(schema, class_index: int) -> str:
    blob = json.dumps(_schema_doc(schema, class_index), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _outcome_doc(outcome):
    if isinstance(outcome, Equals):
        return {"eq": outcome.value}
    if isinstance(outcome, InSubset):
        return {"in": sorted(outcome.values)}
    if isinstance(outcome, LE):
        return {"le": outcome.threshold}
    return {"gt": outcome.threshold}


def _node_doc(node):
    if isinstance(node, NullLeaf):
        return {"null": True}
    if isinstance(node, Leaf):
        return {"leaf": node.label, "dist": list(node.dist)}
    return {
        "attr": node.attr,
        "dist": list(node.dist),
        "branches": [
            {"outcome": _outcome_doc(o), "weight": bw, "node": _node_doc(c)}
            for (o, c), bw in zip(node.branches, node.branch_weights)
        ],
    }


def to_json(tree: DecisionTree) -> str:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "algorithm": tree.algorithm.value,
        "schema_hash": schema_hash(tree.schema, tree.class_index),
        "schema": _schema_doc(tree.schema, tree.class_index),
        "root": _node_doc(tree.root),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def _load_outcome(doc):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ModelFormatError(f"bad outcome {doc!r}")
    (key, val), = doc.items()
    if key == "eq":
        return Equals(int(val))
    if key == "in":
        return InSubset(frozenset(int(v) for v in val))
    if key == "le":
        return LE(float(val))
    if key == "gt":
        return GT(float(val))
    raise ModelFormatError(f"bad outcome {doc!r}")


def _load_node(doc):
    if not isinstance(doc, dict):
        raise ModelFormatError("node must be an object")
    if doc.get("null"):
        return NullLeaf()
    if "leaf" in doc:
        return Leaf(int(doc["leaf"]), tuple(float(x) for x in doc["dist"]))
    branches = doc["branches"]
    return Internal(
        attr=int(doc["attr"]),
        branches=tuple((_load_outcome(b["outcome"]), _load_node(b["node"])) for b in branches),
        dist=tuple(float(x) for x in doc["dist"]),
        branch_weights=tuple(float(b["weight"]) for b in branches),
    )


def from_json(text: str, expected=None) -> DecisionTree:
    """Load a model. ``expected`` (a :class:`Dataset` or ``(schema,
    class_index)`` pair) is checked against the embedded schema hash."""
    try:
        doc = json.loads(text)
        if doc.get("format") != FORMAT_NAME:
            raise ModelFormatError("not a treelab model document")
        if doc.get("version") != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
        sdoc = doc["schema"]
        schema = tuple(
            AttributeSpec(a["name"], tuple(a["values"]) if a["type"] == "nominal" else None)
            for a in sdoc["attributes"]
        )
        class_index = int(sdoc["class_index"])
        algorithm = Algorithm(doc["algorithm"])
        root = _load_node(doc["root"])
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    stored = doc.get("schema_hash")
    if stored != schema_hash(schema, class_index):
        raise SchemaMismatchError("embedded schema does not match its hash")
    if expected is not None:
        if isinstance(expected, Dataset):
            exp_schema, exp_ci = expected.schema, expected.class_index
        else:
            exp_schema, exp_ci = expected
        if schema_hash(exp_schema, exp_ci) != stored:
            raise SchemaMismatchError("model was trained on a different schema")
    return DecisionTree(root, schema, class_index, algorithm)
