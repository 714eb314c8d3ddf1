"""Classification trees over mixed point, interval, and histogram predictors.

Multivalued (interval/histogram) columns split ternarily around reference
objects via a rank-sum routing test; point and categorical columns split
binarily as in classic recursive partitioning. A bootstrap harness compares
the multivalued tree against six scalar-reduction baselines on AUC, Brier
score, and misclassification rate.
"""

from ._params import GrowParams
from .baselines import ALL_BASELINES, BaselineSpec, cart_grow, preprocess
from .bootstrap import (
    Algorithm,
    MetricSample,
    bootstrap_compare,
    default_algorithms,
    runs_to_csv,
    summarize,
)
from .data import (
    DataError,
    Dataset,
    Histogram,
    Interval,
    SchemaError,
    dataset_to_json,
    ecdf_eval,
    load_dataset,
    parse_csv_dataset,
    parse_dataset,
    reduce_histogram,
    reduce_interval,
)
from .metrics import auc, auc_trapezoid, brier, error_rate, roc_curve
from .ranks import (
    RankSample,
    TestResult,
    gini,
    histogram_to_rank_sample,
    normal_two_sided_p,
    rank_test,
    studentized_t,
    wilcoxon_w,
)
from .splitting import (
    Branch,
    CandidateScore,
    HistogramRef,
    IntervalRef,
    NominalSubset,
    PointCut,
    SplitSpec,
    best_split,
    delta_impurity,
    enumerate_candidates,
    route_histogram,
    route_interval,
    route_point,
)
from .synth import Component, GenSpec, generate, noise_spec, separated_spec, signal_in_shape_spec
from .tree import Tree, TreeNode, child_id, export, grow, predict, predict_row, tree_from_json, tree_to_json

__version__ = "0.1.0"

__all__ = [
    "ALL_BASELINES",
    "Algorithm",
    "BaselineSpec",
    "Branch",
    "CandidateScore",
    "Component",
    "DataError",
    "Dataset",
    "GenSpec",
    "GrowParams",
    "Histogram",
    "HistogramRef",
    "Interval",
    "IntervalRef",
    "MetricSample",
    "NominalSubset",
    "PointCut",
    "RankSample",
    "SchemaError",
    "SplitSpec",
    "TestResult",
    "Tree",
    "TreeNode",
    "auc",
    "auc_trapezoid",
    "best_split",
    "bootstrap_compare",
    "brier",
    "cart_grow",
    "child_id",
    "dataset_to_json",
    "default_algorithms",
    "delta_impurity",
    "ecdf_eval",
    "enumerate_candidates",
    "error_rate",
    "export",
    "generate",
    "gini",
    "grow",
    "histogram_to_rank_sample",
    "load_dataset",
    "noise_spec",
    "normal_two_sided_p",
    "parse_csv_dataset",
    "parse_dataset",
    "predict",
    "predict_row",
    "preprocess",
    "rank_test",
    "reduce_histogram",
    "reduce_interval",
    "roc_curve",
    "route_histogram",
    "route_interval",
    "route_point",
    "runs_to_csv",
    "separated_spec",
    "signal_in_shape_spec",
    "studentized_t",
    "summarize",
    "tree_from_json",
    "tree_to_json",
    "wilcoxon_w",
]
