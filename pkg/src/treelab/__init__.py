"""treelab: ID3, C4.5 and CART decision trees for small tabular datasets."""

__version__ = "0.1.0"

from .c45 import C45Config, build_c45, pessimistic_upper_error, prune_pessimistic
from .cart import CartConfig, best_binary_split, build_cart, prune_cost_complexity
from .dataset import (
    AttributeSpec,
    Dataset,
    Instance,
    bin_grade,
    derive_result,
    generate_synthetic,
    parse_arff,
    partition,
    read_arff,
    serialize_arff,
    write_arff,
)
from .evaluation import (
    EvaluationReport,
    FoldPlan,
    class_rates,
    cross_validate,
    induce,
    render_report,
    stratified_folds,
)
from .id3 import build_id3
from .kernels import BACKEND
from .tree import Algorithm, DecisionTree, from_json, node_count, predict, render_rules, to_json
