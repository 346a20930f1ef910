import numpy as np
import pytest

from treelab.dataset import Dataset, Instance, nominal

OUTLOOK = ["sunny", "sunny", "overcast", "rain", "rain", "rain", "overcast",
           "sunny", "sunny", "rain", "sunny", "overcast", "overcast", "rain"]
TEMP = ["hot", "hot", "hot", "mild", "cool", "cool", "cool",
        "mild", "cool", "mild", "mild", "mild", "hot", "mild"]
HUMIDITY = ["high", "high", "high", "high", "normal", "normal", "normal",
            "high", "normal", "normal", "normal", "high", "normal", "high"]
WIND = ["weak", "strong", "weak", "weak", "weak", "strong", "strong",
        "weak", "weak", "weak", "strong", "strong", "weak", "strong"]
PLAY = ["no", "no", "yes", "yes", "yes", "no", "yes",
        "no", "yes", "yes", "yes", "yes", "yes", "no"]


def make_dataset(columns, names, values, class_index=None):
    """Build a nominal dataset from per-column string lists."""
    schema = tuple(nominal(n, *v) for n, v in zip(names, values))
    rows = []
    for row in zip(*columns):
        rows.append(Instance(tuple(None if x is None else s.values.index(x) for s, x in zip(schema, row))))
    ci = len(schema) - 1 if class_index is None else class_index
    return Dataset("t", schema, ci, tuple(rows))


@pytest.fixture
def tennis():
    return make_dataset(
        [OUTLOOK, TEMP, HUMIDITY, WIND, PLAY],
        ["outlook", "temperature", "humidity", "windy", "play"],
        [["sunny", "overcast", "rain"], ["hot", "mild", "cool"], ["high", "normal"],
         ["weak", "strong"], ["yes", "no"]],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
