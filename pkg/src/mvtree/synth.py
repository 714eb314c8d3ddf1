"""Seeded synthetic multivalued datasets for tests and desk-scale runs.

Histogram cells are built by sampling a per-class normal mixture, binning
the draws on a support grid shared by every object of the column, and
trimming unoccupied leading/trailing bins (interior empty bins are kept so
bins stay contiguous).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import (
    Dataset,
    Histogram,
    HistogramColumn,
    Interval,
    IntervalColumn,
    PointColumn,
)


@dataclass(frozen=True)
class Component:
    weight: float
    loc: float
    scale: float

    def __post_init__(self):
        if self.weight <= 0 or self.scale <= 0:
            raise ValueError("component weight and scale must be positive")


# single shared family: histograms carry no class signal
_NULL_FAMILY = ((Component(1.0, 0.0, 1.0),), (Component(1.0, 0.0, 1.0),))


@dataclass(frozen=True)
class GenSpec:
    """Recipe for a two-class dataset with point, interval, and histogram columns.

    ``point_shift``/``interval_drift`` offset the second class's point and
    interval-center laws; ``histogram_family`` gives the per-class mixtures
    behind histogram cells. ``noise_columns`` adds class-independent point
    columns.
    """

    n_per_class: int = 60
    point_columns: int = 1
    interval_columns: int = 1
    histogram_columns: int = 1
    noise_columns: int = 2
    point_shift: float = 0.0
    interval_drift: float = 0.0
    histogram_family: tuple = _NULL_FAMILY  # (class-0 components, class-1 components)
    bins: int = 24
    points_per_histogram: int = 60
    support_pad: float = 0.25
    class_labels: tuple = ("A", "B")
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be at least 1")
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        if self.points_per_histogram < 1:
            raise ValueError("points_per_histogram must be at least 1")
        for fam in self.histogram_family:
            total = sum(c.weight for c in fam)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"mixture weights must sum to 1, got {total}")


def _family_support(spec: GenSpec) -> tuple:
    los, his = [], []
    for fam in spec.histogram_family:
        for c in fam:
            los.append(c.loc - 4.0 * c.scale)
            his.append(c.loc + 4.0 * c.scale)
    return min(los) - spec.support_pad, max(his) + spec.support_pad


def _sample_mixture(rng, components, m) -> np.ndarray:
    weights = np.array([c.weight for c in components])
    which = rng.choice(len(components), size=m, p=weights / weights.sum())
    draws = np.empty(m)
    for k, comp in enumerate(components):
        sel = which == k
        draws[sel] = rng.normal(comp.loc, comp.scale, int(sel.sum()))
    return draws


def _make_histogram(draws, edges) -> Histogram:
    counts, _ = np.histogram(draws, bins=edges)
    occupied = np.nonzero(counts)[0]
    lo, hi = occupied[0], occupied[-1]
    return Histogram(edges[lo:hi + 2], counts[lo:hi + 1] / counts.sum())


def generate(spec: GenSpec) -> Dataset:
    """Deterministic dataset for the given recipe and seed."""
    rng = np.random.default_rng(spec.seed)
    n = 2 * spec.n_per_class
    classes = np.repeat([0, 1], spec.n_per_class)

    columns = []
    for k in range(spec.point_columns):
        shift = classes * spec.point_shift
        columns.append(PointColumn(f"pt{k}", rng.normal(0.0, 1.0, n) + shift))
    for k in range(spec.interval_columns):
        centers = rng.normal(0.0, 1.0, n) + classes * spec.interval_drift
        widths = np.abs(rng.normal(0.0, 0.5, n)) + 0.1
        cells = tuple(Interval(c - w, c + w) for c, w in zip(centers, widths))
        columns.append(IntervalColumn(f"iv{k}", cells))
    if spec.histogram_columns > 0:
        support = _family_support(spec)
        edges = np.linspace(support[0], support[1], spec.bins + 1)
        for k in range(spec.histogram_columns):
            cells = []
            for i in range(n):
                fam = spec.histogram_family[classes[i]]
                draws = _sample_mixture(rng, fam, spec.points_per_histogram)
                draws = np.clip(draws, support[0], support[1] - 1e-9)
                cells.append(_make_histogram(draws, edges))
            columns.append(HistogramColumn(f"hist{k}", tuple(cells)))
    for k in range(spec.noise_columns):
        columns.append(PointColumn(f"noise{k}", rng.normal(0.0, 1.0, n)))

    order = rng.permutation(n)
    y = tuple(spec.class_labels[classes[i]] for i in order)
    columns = tuple(c.take(order) for c in columns)
    return Dataset(columns, y, spec.class_labels)


def separated_spec(n_per_class: int = 30, seed: int = 0) -> GenSpec:
    """Point-only dataset a depth-2 tree separates perfectly."""
    return GenSpec(
        n_per_class=n_per_class,
        point_columns=1,
        interval_columns=0,
        histogram_columns=0,
        noise_columns=2,
        point_shift=10.0,
        seed=seed,
    )


# Signal-in-shape mixture: both classes share the mean, the median, and
# (approximately) the per-object mean variance, so scalar reductions carry
# no class signal. The second class's rightmost component is much wider
# than its leftmost, which skews the occupied bin range that the unweighted
# midpoint rank test sees. The central spike pins both sample medians.
_SHAPE_CLASS0_SIDE = 0.5438  # matches the class-1 per-object mean variance
_SHAPE_FAMILY = (
    (
        Component(0.3, -1.0, _SHAPE_CLASS0_SIDE),
        Component(0.4, 0.0, 0.10),
        Component(0.3, 1.0, _SHAPE_CLASS0_SIDE),
    ),
    (
        Component(0.3, -1.0, 0.06),
        Component(0.4, 0.02, 0.10),
        Component(0.3, 0.9733, 0.80),
    ),
)


def signal_in_shape_spec(n_per_class: int = 60, seed: int = 0) -> GenSpec:
    """Histogram-shape class signal that scalar reductions cannot see."""
    return GenSpec(
        n_per_class=n_per_class,
        point_columns=0,
        interval_columns=1,
        histogram_columns=1,
        noise_columns=2,
        histogram_family=_SHAPE_FAMILY,
        bins=64,
        points_per_histogram=60,
        seed=seed,
    )


def noise_spec(n_per_class: int = 40, seed: int = 0) -> GenSpec:
    """No class signal anywhere: identical laws for both classes."""
    return GenSpec(
        n_per_class=n_per_class,
        point_columns=1,
        interval_columns=1,
        histogram_columns=1,
        noise_columns=2,
        point_shift=0.0,
        interval_drift=0.0,
        histogram_family=_NULL_FAMILY,
        bins=16,
        seed=seed,
    )


PRESETS = {
    "separated": separated_spec,
    "signal-in-shape": signal_in_shape_spec,
    "noise": noise_spec,
}
