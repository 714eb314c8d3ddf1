import numpy as np
import pytest

from mvtree._params import GrowParams
from mvtree.data import (
    CategoricalColumn,
    Dataset,
    Histogram,
    HistogramColumn,
    Interval,
    IntervalColumn,
    PointColumn,
)
from mvtree.ranks import gini
from mvtree.splitting import (
    Branch,
    HistogramRef,
    IntervalRef,
    PointCut,
    best_split,
    delta_impurity,
    enumerate_candidates,
    route_cell,
    route_histogram,
    route_interval,
    route_point,
    route_rows,
)

from conftest import hist_from_mids


class TestRoutePoint:
    def test_below_cut(self):
        assert route_point(0.5, 0.589) is Branch.LEFT

    def test_boundary_goes_left(self):
        assert route_point(0.589, 0.589) is Branch.LEFT

    def test_above_cut(self):
        assert route_point(1823.68, 1823.67) is Branch.RIGHT


class TestRouteInterval:
    REF = Interval(0.20, 0.23)

    def test_both_bounds_below(self):
        assert route_interval(Interval(0.10, 0.15), self.REF) is Branch.LEFT

    def test_both_bounds_above(self):
        assert route_interval(Interval(0.25, 0.30), self.REF) is Branch.RIGHT

    def test_nested(self):
        assert route_interval(Interval(0.21, 0.22), self.REF) is Branch.CENTER

    def test_partial_overlap_and_boundaries_are_central(self):
        assert route_interval(Interval(0.10, 0.30), self.REF) is Branch.CENTER
        assert route_interval(Interval(0.20, 0.22), self.REF) is Branch.CENTER
        assert route_interval(Interval(0.21, 0.23), self.REF) is Branch.CENTER

    def test_self_is_central(self):
        assert route_interval(self.REF, self.REF) is Branch.CENTER

    def test_antisymmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = Interval(*np.sort(rng.normal(size=2)))
            b = Interval(*np.sort(rng.normal(size=2)))
            ab = route_interval(a, b)
            ba = route_interval(b, a)
            if ab is Branch.LEFT:
                assert ba is Branch.RIGHT
            if ab is Branch.RIGHT:
                assert ba is Branch.LEFT


class TestRouteHistogram:
    def test_identical_is_central(self):
        h = hist_from_mids([1, 2, 3])
        assert route_histogram(h, h, 0.05) is Branch.CENTER

    def test_separated_at_five_percent(self):
        ref = hist_from_mids([1, 2, 3])
        j = hist_from_mids([4, 5, 6])
        # T = -1.9640, p = 0.0495 < 0.05
        assert route_histogram(j, ref, 0.05) is Branch.LEFT

    def test_separated_at_one_percent(self):
        ref = hist_from_mids([1, 2, 3])
        j = hist_from_mids([4, 5, 6])
        assert route_histogram(j, ref, 0.01) is Branch.CENTER

    def test_self_routing_centrality_random(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            h = hist_from_mids(np.unique(rng.normal(size=5).round(2)))
            assert route_histogram(h, h, 0.5) is Branch.CENTER
            assert route_histogram(h, h, 0.5, weighted=True) is Branch.CENTER


def point_dataset(values, labels, class_labels=("a", "b")):
    return Dataset(
        (PointColumn("x", np.asarray(values, dtype=float)),),
        tuple(labels),
        class_labels,
    )


class TestEnumerate:
    def test_point_m_minus_one(self):
        ds = point_dataset([1, 2, 3, 4], "abab")
        specs = enumerate_candidates(np.arange(4), ds, 0, alpha=0.05)
        assert [s.kind.cut for s in specs] == [1.0, 2.0, 3.0]

    def test_point_with_duplicates(self):
        ds = point_dataset([1, 1, 2, 2, 3], "ababa")
        specs = enumerate_candidates(np.arange(5), ds, 0, alpha=0.05)
        assert [s.kind.cut for s in specs] == [1.0, 2.0]

    def test_constant_column_empty(self):
        ds = point_dataset([7, 7, 7], "aba")
        assert enumerate_candidates(np.arange(3), ds, 0, alpha=0.05) == []

    def test_categorical_count(self):
        col = CategoricalColumn("c", ("x", "y", "z", "x", "y", "z"))
        ds = Dataset((col,), tuple("ababab"), ("a", "b"))
        specs = enumerate_candidates(np.arange(6), ds, 0, alpha=0.05)
        assert len(specs) == 3  # 2^(3-1) - 1
        for s in specs:
            assert "x" in s.kind.left_levels  # anchored on the first level
            assert len(s.kind.left_levels) < 3

    def test_histogram_one_per_distinct(self):
        h1 = hist_from_mids([1, 2])
        h2 = hist_from_mids([3, 4])
        h3 = hist_from_mids([1, 2])  # duplicate of h1
        col = HistogramColumn("h", (h1, h2, h3, h2, h1))
        ds = Dataset((col,), tuple("ababa"), ("a", "b"))
        specs = enumerate_candidates(np.arange(5), ds, 0, alpha=0.05)
        assert len(specs) == 2
        assert [s.reference_object for s in specs] == [0, 1]  # lowest row ids

    def test_five_distinct_histograms_five_specs(self):
        cells = tuple(hist_from_mids([k, k + 1]) for k in range(5))
        ds = Dataset((HistogramColumn("h", cells),), tuple("ababa"), ("a", "b"))
        specs = enumerate_candidates(np.arange(5), ds, 0, alpha=0.05)
        assert len(specs) == 5

    def test_interval_dedup_by_routing(self):
        # nested chain: middle intervals route everything identically
        cells = (
            Interval(0.0, 10.0),
            Interval(1.0, 9.0),
            Interval(2.0, 8.0),
            Interval(3.0, 7.0),
        )
        ds = Dataset((IntervalColumn("v", cells),), tuple("abab"), ("a", "b"))
        specs = enumerate_candidates(np.arange(4), ds, 0, alpha=0.05)
        # every reference here routes all objects Center except ends, dedupe
        # keeps one per distinct assignment, anchored at the lowest row id
        refs = [s.reference_object for s in specs]
        assert refs == sorted(refs)
        assert len(specs) <= 4

    def test_max_references_cap(self):
        rng = np.random.default_rng(5)
        cells = tuple(hist_from_mids(np.sort(rng.normal(size=4)) + k) for k in range(10))
        ds = Dataset((HistogramColumn("h", cells),), tuple("ababababab"), ("a", "b"))
        specs = enumerate_candidates(
            np.arange(10), ds, 0, alpha=0.05, max_references=4,
            rng=np.random.default_rng(0),
        )
        assert len(specs) == 4


class TestDeltaImpurity:
    def test_perfect_binary_separation(self):
        assert delta_impurity([2, 2], [[2, 0], [0, 2]]) == pytest.approx(0.5)

    def test_ternary_example(self):
        d = delta_impurity([4, 4], [[2, 0], [1, 2], [1, 2]])
        assert d == pytest.approx(0.16667, abs=1e-5)

    def test_single_child_no_gain(self):
        assert delta_impurity([3, 3], [[3, 3]]) == pytest.approx(0.0)

    def test_mismatched_counts_rejected(self):
        with pytest.raises(ValueError, match="do not sum"):
            delta_impurity([2, 2], [[1, 0], [0, 1]])

    def test_nonnegative_and_zero_when_proportions_replicate(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            parent = rng.integers(1, 12, size=2)
            # random true partition
            left = np.array([rng.integers(0, parent[0] + 1), rng.integers(0, parent[1] + 1)])
            right = parent - left
            if left.sum() == 0 or right.sum() == 0:
                continue
            assert delta_impurity(parent, [left, right]) >= -1e-12
        # children replicating parent proportions carry zero gain
        assert delta_impurity([6, 3], [[4, 2], [2, 1]]) == pytest.approx(0.0, abs=1e-12)


class TestBestSplit:
    def test_perfect_point_split(self):
        ds = point_dataset([1, 2, 3, 10, 11, 12], "aaabbb")
        cand = best_split(np.arange(6), ds, GrowParams(min_node_size=1))
        assert isinstance(cand.spec.kind, PointCut)
        assert cand.spec.kind.cut == 3.0
        assert cand.delta == pytest.approx(gini([3, 3]))

    def test_pure_node_absent(self):
        ds = point_dataset([1, 2, 3], "aaa")
        assert best_split(np.arange(3), ds, GrowParams()) is None

    def test_constant_predictors_absent(self):
        ds = point_dataset([5, 5, 5, 5], "abab")
        assert best_split(np.arange(4), ds, GrowParams()) is None

    def test_min_child_size_filters(self):
        ds = point_dataset([1, 2, 3, 4], "aabb")
        cand = best_split(np.arange(4), ds, GrowParams(min_child_size=2))
        assert cand.spec.kind.cut == 2.0

    def test_child_counts_partition_parent(self, mixed_dataset):
        rows = np.arange(mixed_dataset.n)
        cand = best_split(rows, mixed_dataset, GrowParams())
        total = sum(v.sum() for v in cand.child_counts.values())
        assert total == mixed_dataset.n
        parent = np.bincount(mixed_dataset.y_codes, minlength=2)
        assert np.array_equal(sum(cand.child_counts.values()), parent)

    def test_deterministic(self, mixed_dataset):
        rows = np.arange(mixed_dataset.n)
        a = best_split(rows, mixed_dataset, GrowParams())
        b = best_split(rows, mixed_dataset, GrowParams())
        assert a.spec == b.spec and a.delta == b.delta

    def test_tie_breaks_to_lower_predictor(self):
        # two identical point columns: the first must win
        vals = np.array([1.0, 2.0, 3.0, 4.0])
        ds = Dataset(
            (PointColumn("x1", vals), PointColumn("x2", vals)),
            tuple("aabb"),
            ("a", "b"),
        )
        cand = best_split(np.arange(4), ds, GrowParams(min_node_size=1))
        assert cand.spec.predictor_index == 0

    def test_histogram_beats_weaker_point_signal(self):
        """Exhaustive-scoring oracle: best_split returns the max-delta candidate."""
        rng = np.random.default_rng(7)
        n = 20
        y = tuple("ab"[i % 2] for i in range(n))
        # histogram column separates classes; point column is weak noise
        cells = tuple(
            hist_from_mids(np.sort(rng.normal((i % 2) * 8.0, 0.5, 5)).round(3))
            for i in range(n)
        )
        ds = Dataset(
            (PointColumn("p", rng.normal(size=n)), HistogramColumn("h", cells)),
            y,
            ("a", "b"),
        )
        rows = np.arange(n)
        params = GrowParams(min_node_size=1)
        cand = best_split(rows, ds, params)
        # oracle: score every candidate by routing + delta_impurity
        best_delta = -np.inf
        for p in range(ds.P):
            for spec in enumerate_candidates(rows, ds, p, params.alpha):
                parts = route_rows(rows, ds, spec)
                if len(parts) < 2:
                    continue
                counts = [
                    np.bincount(ds.y_codes[r], minlength=2) for r in parts.values()
                ]
                best_delta = max(best_delta, delta_impurity([10, 10], counts))
        assert isinstance(cand.spec.kind, HistogramRef)
        assert cand.delta == pytest.approx(best_delta)


class TestRouteRows:
    def test_routing_is_total(self, mixed_dataset):
        rows = np.arange(mixed_dataset.n)
        params = GrowParams()
        for p in range(mixed_dataset.P):
            for spec in enumerate_candidates(rows, mixed_dataset, p, params.alpha)[:5]:
                parts = route_rows(rows, mixed_dataset, spec)
                routed = np.concatenate(list(parts.values()))
                assert sorted(routed) == list(rows)

    def test_route_cell_matches_route_rows(self, mixed_dataset):
        rows = np.arange(mixed_dataset.n)
        params = GrowParams()
        for p in range(mixed_dataset.P):
            specs = enumerate_candidates(rows, mixed_dataset, p, params.alpha)[:3]
            for spec in specs:
                parts = route_rows(rows, mixed_dataset, spec)
                for branch, rws in parts.items():
                    for i in rws:
                        cell = mixed_dataset.columns[p].cell(int(i))
                        assert route_cell(cell, spec) is branch
