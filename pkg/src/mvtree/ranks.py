"""Nonparametric machinery behind histogram splits: rank sums, the
studentized two-sample statistic, its normal p-value, and the Gini index."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import Histogram

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RankSample:
    """Observation points entering a rank test, optionally weighted."""

    values: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] < 1:
            raise ValueError("rank sample needs at least one observation")
        if not np.all(np.isfinite(v)):
            raise ValueError("rank sample values must be finite")
        object.__setattr__(self, "values", v)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != v.shape or np.any(w < 0):
                raise ValueError("weights must be non-negative and match values")
            object.__setattr__(self, "weights", w)

    @property
    def size(self) -> float:
        if self.weights is None:
            return float(self.values.shape[0])
        return float(self.weights.sum())


@dataclass(frozen=True)
class TestResult:
    """Rank sum W, studentized T, and the two-sided normal p-value."""

    W: float
    T: float
    p_value: float
    degenerate: bool = False


def histogram_to_rank_sample(h: Histogram, weighted: bool = False) -> RankSample:
    """One observation per bin, at the bin midpoint.

    With ``weighted=True`` each midpoint carries weight ``freq * H`` so that
    a uniform histogram reduces to the unweighted case.
    """
    if weighted:
        return RankSample(h.midpoints, h.freqs * h.H)
    return RankSample(h.midpoints)


def wilcoxon_w(reference: RankSample, other: RankSample) -> float:
    """Sum of the reference sample's midranks within the merged sample."""
    if reference.weights is not None or other.weights is not None:
        ref_w = reference.weights if reference.weights is not None else np.ones_like(reference.values)
        oth_w = other.weights if other.weights is not None else np.ones_like(other.values)
        values = np.concatenate((reference.values, other.values))
        weights = np.concatenate((ref_w, oth_w))
        return float(kernels.weighted_rank_sum(values, weights, reference.values.shape[0]))
    return float(kernels.rank_sum(reference.values, other.values))


def studentized_t(W: float, h_i: float, h_j: float) -> float:
    """Center W by its null mean and scale by its null standard deviation.

    Degenerate variance (either sample size 0) maps to T = 0.
    """
    var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
    if var <= 0.0:
        return 0.0
    return (W - h_i * (h_i + h_j + 1.0) / 2.0) / math.sqrt(var)


def normal_two_sided_p(t: float) -> float:
    """Two-sided tail probability of the standard normal at |t|."""
    return math.erfc(abs(t) / _SQRT2)


def rank_test(reference: RankSample, other: RankSample) -> TestResult:
    """Full two-sample comparison of ``other`` against ``reference``."""
    w = wilcoxon_w(reference, other)
    h_i, h_j = reference.size, other.size
    var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
    if var <= 0.0:
        return TestResult(W=w, T=0.0, p_value=1.0, degenerate=True)
    t = studentized_t(w, h_i, h_j)
    return TestResult(W=w, T=t, p_value=normal_two_sided_p(t))


def gini(class_counts) -> float:
    """Gini diversity index 1 - sum((n_c / n)^2)."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise ValueError("class counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("class counts must not all be zero")
    p = counts / total
    return float(1.0 - np.sum(p * p))
