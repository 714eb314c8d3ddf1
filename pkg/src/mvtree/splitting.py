"""Candidate split generation, object routing, and impurity scoring.

Point/categorical predictors yield binary splits; interval and histogram
predictors yield ternary splits anchored at a reference object. Candidate
scoring is vectorized: each predictor produces a branch-code matrix
(candidates x node rows) whose per-branch class counts come from three
matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ._params import GrowParams
from . import kernels
from .data import (
    CATEGORICAL,
    INTERVAL,
    POINT,
    Dataset,
    Histogram,
    Interval,
)
from .ranks import gini


class Branch(IntEnum):
    LEFT = kernels.LEFT_CODE
    CENTER = kernels.CENTER_CODE
    RIGHT = kernels.RIGHT_CODE


@dataclass(frozen=True)
class PointCut:
    cut: float

    tag = "point"


@dataclass(frozen=True)
class NominalSubset:
    left_levels: tuple

    tag = "categorical"


@dataclass(frozen=True)
class IntervalRef:
    ref: Interval

    tag = "interval"


@dataclass(frozen=True)
class HistogramRef:
    ref: Histogram
    alpha: float
    weighted: bool = False

    tag = "histogram"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


SplitKind = PointCut | NominalSubset | IntervalRef | HistogramRef


@dataclass(frozen=True)
class SplitSpec:
    """A fitted partitioning rule on one predictor column."""

    predictor_index: int
    kind: SplitKind
    reference_object: int | None = None

    @property
    def ternary(self) -> bool:
        return isinstance(self.kind, (IntervalRef, HistogramRef))


@dataclass(frozen=True)
class CandidateScore:
    spec: SplitSpec
    delta: float
    child_counts: dict  # Branch -> count vector


def route_point(x: float, c: float) -> Branch:
    """Binary point rule: left iff x <= c."""
    return Branch.LEFT if x <= c else Branch.RIGHT


def route_interval(j: Interval, ref: Interval) -> Branch:
    """Ternary interval rule against a reference interval.

    Strictly below on both bounds goes left, strictly above on both goes
    right, every other overlap configuration is central.
    """
    if j.lower < ref.lower and j.upper < ref.upper:
        return Branch.LEFT
    if j.lower > ref.lower and j.upper > ref.upper:
        return Branch.RIGHT
    return Branch.CENTER


def route_histogram(j: Histogram, ref: Histogram, alpha: float, weighted: bool = False) -> Branch:
    """Ternary histogram rule against a reference histogram.

    T is the studentized rank sum of the reference sample within the merged
    midpoint sample; the object goes left when T < 0 with p below alpha,
    right when T > 0 with p below alpha, and central otherwise.
    """
    if weighted:
        code = kernels.weighted_route_pair(
            ref.midpoints, ref.freqs * ref.H, j.midpoints, j.freqs * j.H, alpha
        )
    else:
        code = kernels.route_pair(ref.midpoints, j.midpoints, alpha)
    return Branch(int(code))


def route_cell(cell, spec: SplitSpec) -> Branch:
    """Route one predictor cell with a fitted split (prediction path)."""
    kind = spec.kind
    if isinstance(kind, PointCut):
        return route_point(cell, kind.cut)
    if isinstance(kind, NominalSubset):
        return Branch.LEFT if cell in kind.left_levels else Branch.RIGHT
    if isinstance(kind, IntervalRef):
        return route_interval(cell, kind.ref)
    return route_histogram(cell, kind.ref, kind.alpha, kind.weighted)


def delta_impurity(parent_counts, child_counts) -> float:
    """Gini decrease of a candidate partition.

    ``child_counts`` is an iterable of per-branch class-count vectors; they
    must sum to the parent counts. Empty branches contribute nothing.
    """
    parent = np.asarray(parent_counts, dtype=np.float64)
    kids = [np.asarray(c, dtype=np.float64) for c in child_counts]
    total = sum(kids) if kids else np.zeros_like(parent)
    if not np.array_equal(total, parent):
        raise ValueError("child counts do not sum to parent counts")
    n = parent.sum()
    if n < 1:
        raise ValueError("parent must contain at least one object")
    out = gini(parent)
    for c in kids:
        nk = c.sum()
        if nk > 0:
            out -= (nk / n) * gini(c)
    return float(out)


def _point_candidates(col, rows):
    """Branch codes for the m-1 cutpoints of a numeric column."""
    v = col.values[rows]
    distinct = np.unique(v)
    if distinct.shape[0] < 2:
        return None
    cuts = distinct[:-1]
    codes = np.where(
        v[None, :] <= cuts[:, None], np.int8(Branch.LEFT), np.int8(Branch.RIGHT)
    )
    order_keys = cuts
    return codes, list(cuts), order_keys


def _categorical_candidates(col, rows):
    """Branch codes for the 2^(m-1) - 1 level subsets containing the anchor."""
    cells = [col.values[i] for i in rows]
    present = sorted(set(cells))
    m = len(present)
    if m < 2:
        return None
    anchor, rest = present[0], present[1:]
    cell_arr = np.array(cells)
    subsets = []
    for mask in range(2 ** (m - 1)):
        left = (anchor,) + tuple(lev for b, lev in enumerate(rest) if mask >> b & 1)
        if len(left) == m:
            continue  # full set leaves the right child empty
        subsets.append(left)
    codes = np.empty((len(subsets), len(rows)), dtype=np.int8)
    for k, left in enumerate(subsets):
        member = np.isin(cell_arr, left)
        codes[k] = np.where(member, np.int8(Branch.LEFT), np.int8(Branch.RIGHT))
    return codes, subsets, np.arange(len(subsets))


def _interval_candidates(col, rows):
    """Branch codes for interval references, deduplicated by routing.

    References with identical left/center/right assignments collapse onto
    the lowest row id, realizing the n - v + 1 admissible-partition count.
    """
    lo = col.lowers[rows]
    up = col.uppers[rows]
    pairs = np.stack([lo, up], axis=1)
    _, first = np.unique(pairs, axis=0, return_index=True)
    cand = np.sort(first)  # positions within rows, ascending row id
    left = (lo[None, :] < lo[cand, None]) & (up[None, :] < up[cand, None])
    right = (lo[None, :] > lo[cand, None]) & (up[None, :] > up[cand, None])
    codes = np.full((cand.shape[0], rows.shape[0]), np.int8(Branch.CENTER))
    codes[left] = np.int8(Branch.LEFT)
    codes[right] = np.int8(Branch.RIGHT)
    _, keep = np.unique(codes, axis=0, return_index=True)
    keep = np.sort(keep)
    cand = cand[keep]
    return codes[keep], [int(rows[k]) for k in cand], rows[cand]


def _histogram_candidates(col, rows, alpha, weighted, max_references, rng):
    """Branch codes for one reference per distinct histogram in the node."""
    seen = {}
    for pos in range(rows.shape[0]):
        key = col.cells[rows[pos]].key
        if key not in seen:
            seen[key] = pos
    cand = np.array(sorted(seen.values()), dtype=np.int64)
    if max_references is not None and cand.shape[0] > max_references:
        pick = rng.choice(cand.shape[0], size=max_references, replace=False)
        cand = cand[np.sort(pick)]
    ref_rows = rows[cand]
    if weighted:
        codes = kernels.weighted_route_matrix(
            col.flat_midpoints, col.flat_weights, col.starts, col.lengths,
            ref_rows, rows, alpha,
        )
    else:
        codes = kernels.route_matrix(
            col.flat_midpoints, col.starts, col.lengths, ref_rows, rows, alpha
        )
    return codes, [int(r) for r in ref_rows], ref_rows


def _score_candidates(codes, y_onehot, parent_counts, n, min_child_size):
    """Vectorized Gini decrease and admissibility for a code matrix."""
    branch_counts = []
    for b in (Branch.LEFT, Branch.CENTER, Branch.RIGHT):
        branch_counts.append((codes == np.int8(b)).astype(np.float64) @ y_onehot)
    parent_gini = gini(parent_counts)
    deltas = np.full(codes.shape[0], parent_gini)
    non_empty = np.zeros(codes.shape[0], dtype=np.int64)
    min_size = np.full(codes.shape[0], np.inf)
    for counts in branch_counts:
        nk = counts.sum(axis=1)
        occupied = nk > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            child_gini = 1.0 - np.sum((counts / nk[:, None]) ** 2, axis=1)
        child_gini[~occupied] = 0.0
        deltas -= np.where(occupied, (nk / n) * child_gini, 0.0)
        non_empty += occupied
        min_size = np.minimum(min_size, np.where(occupied, nk, np.inf))
    admissible = (non_empty >= 2) & (min_size >= min_child_size)
    return deltas, admissible, branch_counts


def enumerate_candidates(
    node_rows,
    dataset: Dataset,
    predictor_index: int,
    alpha: float,
    weighted: bool = False,
    max_references: int | None = None,
    rng=None,
) -> list:
    """All candidate splits one predictor generates for a node.

    Point columns with m distinct values give m-1 cutpoints, categorical
    columns with m levels give 2^(m-1) - 1 subsets, histogram columns one
    reference per distinct cell, interval columns one reference per distinct
    routing. A constant column yields an empty list.
    """
    rows = np.asarray(node_rows, dtype=np.int64)
    col = dataset.columns[predictor_index]
    if col.kind == POINT:
        got = _point_candidates(col, rows)
        if got is None:
            return []
        _, cuts, _ = got
        return [SplitSpec(predictor_index, PointCut(float(c))) for c in cuts]
    if col.kind == CATEGORICAL:
        got = _categorical_candidates(col, rows)
        if got is None:
            return []
        _, subsets, _ = got
        return [SplitSpec(predictor_index, NominalSubset(s)) for s in subsets]
    if col.kind == INTERVAL:
        if rows.shape[0] < 1:
            return []
        _, ref_ids, _ = _interval_candidates(col, rows)
        return [
            SplitSpec(predictor_index, IntervalRef(col.cells[r]), reference_object=r)
            for r in ref_ids
        ]
    if rng is None:
        rng = np.random.default_rng(0)
    _, ref_ids, _ = _histogram_candidates(col, rows, alpha, weighted, max_references, rng)
    return [
        SplitSpec(
            predictor_index,
            HistogramRef(col.cells[r], alpha, weighted),
            reference_object=r,
        )
        for r in ref_ids
    ]


def route_rows(rows, dataset: Dataset, spec: SplitSpec) -> dict:
    """Partition node rows with a fitted split; returns Branch -> row array."""
    rows = np.asarray(rows, dtype=np.int64)
    col = dataset.columns[spec.predictor_index]
    kind = spec.kind
    if isinstance(kind, PointCut):
        codes = np.where(
            col.values[rows] <= kind.cut, np.int8(Branch.LEFT), np.int8(Branch.RIGHT)
        )
    elif isinstance(kind, NominalSubset):
        member = np.isin(np.array([col.values[i] for i in rows]), kind.left_levels)
        codes = np.where(member, np.int8(Branch.LEFT), np.int8(Branch.RIGHT))
    elif isinstance(kind, IntervalRef):
        lo, up = col.lowers[rows], col.uppers[rows]
        left = (lo < kind.ref.lower) & (up < kind.ref.upper)
        right = (lo > kind.ref.lower) & (up > kind.ref.upper)
        codes = np.full(rows.shape[0], np.int8(Branch.CENTER))
        codes[left] = np.int8(Branch.LEFT)
        codes[right] = np.int8(Branch.RIGHT)
    else:
        ref = np.array([spec.reference_object], dtype=np.int64)
        if kind.weighted:
            codes = kernels.weighted_route_matrix(
                col.flat_midpoints, col.flat_weights, col.starts, col.lengths,
                ref, rows, kind.alpha,
            )[0]
        else:
            codes = kernels.route_matrix(
                col.flat_midpoints, col.starts, col.lengths, ref, rows, kind.alpha
            )[0]
    return {b: rows[codes == np.int8(b)] for b in Branch if np.any(codes == np.int8(b))}


def best_split(node_rows, dataset: Dataset, params: GrowParams, node_id: int = 1):
    """Highest-Gini-decrease admissible candidate over all predictors.

    Candidates with fewer than two non-empty children, or any non-empty
    child below ``min_child_size``, are discarded. Ties break toward the
    lower predictor index, then the lower cutpoint / subset index /
    reference row id. Returns None when nothing admissible exists.
    """
    rows = np.asarray(node_rows, dtype=np.int64)
    y = dataset.y_codes[rows]
    n_classes = len(dataset.class_labels)
    parent_counts = np.bincount(y, minlength=n_classes)
    if np.max(parent_counts) == rows.shape[0]:
        return None  # pure node
    y_onehot = np.zeros((rows.shape[0], n_classes))
    y_onehot[np.arange(rows.shape[0]), y] = 1.0

    best = None  # (delta, predictor_index, spec, {branch: counts})
    for p, col in enumerate(dataset.columns):
        if col.kind == POINT:
            got = _point_candidates(col, rows)
            if got is None:
                continue
            codes, payload, _ = got
            make_spec = lambda k: SplitSpec(p, PointCut(float(payload[k])))
        elif col.kind == CATEGORICAL:
            got = _categorical_candidates(col, rows)
            if got is None:
                continue
            codes, payload, _ = got
            make_spec = lambda k: SplitSpec(p, NominalSubset(payload[k]))
        elif col.kind == INTERVAL:
            codes, payload, _ = _interval_candidates(col, rows)
            make_spec = lambda k: SplitSpec(
                p, IntervalRef(col.cells[payload[k]]), reference_object=payload[k]
            )
        else:
            rng = np.random.default_rng([params.seed, node_id, p])
            codes, payload, _ = _histogram_candidates(
                col, rows, params.alpha, params.weighted_ranks, params.max_references, rng
            )
            make_spec = lambda k: SplitSpec(
                p,
                HistogramRef(col.cells[payload[k]], params.alpha, params.weighted_ranks),
                reference_object=payload[k],
            )
        if codes.shape[0] == 0:
            continue
        deltas, admissible, branch_counts = _score_candidates(
            codes, y_onehot, parent_counts, rows.shape[0], params.min_child_size
        )
        if not np.any(admissible):
            continue
        masked = np.where(admissible, deltas, -np.inf)
        k = int(np.argmax(masked))  # first max: candidates are in tie-break order
        if best is None or masked[k] > best[0]:
            counts = {
                b: branch_counts[int(b)][k].astype(np.int64)
                for b in Branch
                if branch_counts[int(b)][k].sum() > 0
            }
            best = (float(masked[k]), p, make_spec(k), counts)
    if best is None:
        return None
    delta, _, spec, counts = best
    return CandidateScore(spec=spec, delta=delta, child_counts=counts)
