"""Scalar-reduction baselines: collapse interval/histogram columns to
points, then grow a plain binary CART with the same engine."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._params import GrowParams
from .data import (
    CATEGORICAL,
    HISTOGRAM,
    INTERVAL,
    POINT,
    DataError,
    Dataset,
    PointColumn,
    reduce_histogram,
    reduce_interval,
)
from .tree import Tree, grow

INTERVAL_MODES = ("lower", "upper", "mean")
HISTOGRAM_MODES = ("mean", "median")


@dataclass(frozen=True)
class BaselineSpec:
    """One scalar-reduction recipe: how intervals and histograms collapse."""

    interval_mode: str
    histogram_mode: str

    def __post_init__(self):
        if self.interval_mode not in INTERVAL_MODES:
            raise ValueError(f"unknown interval mode {self.interval_mode!r}")
        if self.histogram_mode not in HISTOGRAM_MODES:
            raise ValueError(f"unknown histogram mode {self.histogram_mode!r}")

    @property
    def name(self) -> str:
        return f"CART_{self.interval_mode.capitalize()}_{self.histogram_mode.capitalize()}"


ALL_BASELINES = (
    BaselineSpec("lower", "mean"),
    BaselineSpec("upper", "mean"),
    BaselineSpec("lower", "median"),
    BaselineSpec("upper", "median"),
    BaselineSpec("mean", "mean"),
    BaselineSpec("mean", "median"),
)


def preprocess(dataset: Dataset, spec: BaselineSpec) -> Dataset:
    """Collapse every multivalued column to a point column, in place order.

    Point and categorical columns pass through unchanged; the response and
    class labels are untouched.
    """
    columns = []
    for col in dataset.columns:
        if col.kind == INTERVAL:
            vals = np.array([reduce_interval(c, spec.interval_mode) for c in col.cells])
            columns.append(PointColumn(col.name, vals))
        elif col.kind == HISTOGRAM:
            vals = np.array([reduce_histogram(c, spec.histogram_mode) for c in col.cells])
            columns.append(PointColumn(col.name, vals))
        else:
            columns.append(col)
    return Dataset(tuple(columns), dataset.y, dataset.class_labels)


def cart_grow(dataset: Dataset, params: GrowParams | None = None) -> Tree:
    """Grow a binary tree on an all-point/categorical dataset.

    Same engine and contract as the multivalued grower; rejecting
    multivalued columns is the only difference.
    """
    for col in dataset.columns:
        if col.kind not in (POINT, CATEGORICAL):
            raise DataError(
                f"column {col.name!r} is {col.kind}; reduce multivalued columns "
                "before growing a CART baseline"
            )
    return grow(dataset, params)
