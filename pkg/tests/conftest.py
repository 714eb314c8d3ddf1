import json

import numpy as np
import pytest

from mvtree.data import (
    Dataset,
    Histogram,
    HistogramColumn,
    Interval,
    IntervalColumn,
    PointColumn,
    CategoricalColumn,
)


def uniform_hist(lo, hi, n_bins):
    edges = np.linspace(lo, hi, n_bins + 1)
    return Histogram(edges, np.full(n_bins, 1.0 / n_bins))


def hist_from_mids(mids, width=1.0):
    """Histogram whose bin midpoints are exactly ``mids`` (uniform freqs)."""
    mids = np.asarray(mids, dtype=float)
    edges = np.concatenate([mids - width / 2, [mids[-1] + width / 2]])
    return Histogram(edges, np.full(len(mids), 1.0 / len(mids)))


@pytest.fixture
def mixed_dataset():
    """Small fixed dataset with every column kind."""
    rng = np.random.default_rng(123)
    n = 24
    y = tuple("pos" if i % 2 else "neg" for i in range(n))
    point = PointColumn("pt", rng.normal(size=n) + np.array([i % 2 for i in range(n)]) * 2.0)
    cat = CategoricalColumn("cat", tuple(rng.choice(["a", "b", "c"]) for _ in range(n)))
    ivs = []
    for i in range(n):
        c = rng.normal() + (i % 2) * 1.5
        w = abs(rng.normal()) + 0.2
        ivs.append(Interval(c - w, c + w))
    interval = IntervalColumn("iv", tuple(ivs))
    hists = []
    for i in range(n):
        center = (i % 2) * 2.0
        mids = np.sort(rng.normal(center, 1.0, 6))
        hists.append(hist_from_mids(np.unique(np.round(mids, 3)), width=0.05))
    hist = HistogramColumn("hist", tuple(hists))
    return Dataset((point, cat, interval, hist), y, ("neg", "pos"))


@pytest.fixture
def dataset_doc():
    """A tiny JSON dataset document exercising every cell shape."""
    return json.dumps({
        "class_labels": ["B", "M"],
        "predictors": [
            {"name": "size", "kind": "point"},
            {"name": "grade", "kind": "categorical"},
            {"name": "range", "kind": "interval"},
            {"name": "profile", "kind": "histogram"},
        ],
        "rows": [
            {"y": "B", "x": [3.14, "lo", [1.0, 2.0],
                             {"bins": [[0, 2], [2, 4]], "freqs": [0.5, 0.5]}]},
            {"y": "M", "x": [2.71, "hi", [0.5, 0.8],
                             {"bins": [[0, 1]], "freqs": [1.0]}]},
            {"y": "B", "x": [1.41, "lo", [2.0, 3.0],
                             {"bins": [[1, 2], [2, 3], [3, 4]], "freqs": [0.2, 0.3, 0.5]}]},
        ],
    })
