import numpy as np
import pytest

from mvtree.metrics import auc, auc_trapezoid, brier, error_rate, roc_curve


class TestAuc:
    def test_perfect_separation(self):
        assert auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_all_ties(self):
        assert auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == 0.5

    def test_three_of_four_pairs(self):
        assert auc([0.9, 0.8, 0.7, 0.2], [1, 0, 1, 0]) == 0.75

    def test_single_class_returns_none(self):
        assert auc([0.4, 0.6], [1, 1]) is None
        assert auc_trapezoid([0.4, 0.6], [0, 0]) is None

    def test_matches_trapezoid(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(4, 40))
            scores = rng.choice(np.linspace(0, 1, 11), size=n)  # plenty of ties
            truths = rng.integers(0, 2, size=n)
            if truths.min() == truths.max():
                continue
            assert auc(scores, truths) == pytest.approx(
                auc_trapezoid(scores, truths), abs=1e-9
            )

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        scores = rng.uniform(size=30)
        truths = rng.integers(0, 2, size=30)
        if truths.min() == truths.max():
            truths[0] = 1 - truths[0]
        base = auc(scores, truths)
        assert auc(scores**3, truths) == pytest.approx(base)
        # affine into [0,1]
        assert auc(0.5 * scores + 0.25, truths) == pytest.approx(base)

    def test_relabeling_flips(self):
        rng = np.random.default_rng(2)
        scores = rng.uniform(size=25)
        truths = rng.integers(0, 2, size=25)
        truths[0], truths[1] = 0, 1
        assert auc(scores, 1 - truths) == pytest.approx(1 - auc(scores, truths))

    def test_roc_endpoints(self):
        fpr, tpr = roc_curve([0.8, 0.4, 0.6, 0.1], [1, 0, 1, 0])
        assert fpr[0] == 0.0 and tpr[0] == 0.0
        assert fpr[-1] == 1.0 and tpr[-1] == 1.0


class TestBrier:
    def test_perfect(self):
        assert brier([1.0, 0.0], [1, 0]) == 0.0

    def test_constant_half(self):
        assert brier([0.5] * 8, [1, 0, 1, 0, 1, 1, 0, 0]) == 0.25

    def test_hand_example(self):
        assert brier([0.8, 0.3], [1, 0]) == pytest.approx(0.065)

    def test_bounds(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = rng.uniform(size=10)
            t = rng.integers(0, 2, size=10)
            assert 0.0 <= brier(s, t) <= 1.0

    def test_score_out_of_range(self):
        with pytest.raises(ValueError):
            brier([1.2], [1])


class TestErrorRate:
    def test_majority_prediction_on_86_134(self):
        truth = ["M"] * 86 + ["B"] * 134
        predicted = ["B"] * 220
        assert error_rate(predicted, truth) == pytest.approx(0.39091, abs=1e-5)

    def test_identical(self):
        assert error_rate(list("abab"), list("abab")) == 0.0

    def test_fully_mismatched(self):
        assert error_rate(list("aaaa"), list("bbbb")) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            error_rate(["a"], ["a", "b"])
