"""Classifier quality metrics: AUC (pair-counting and ROC-trapezoid forms),
Brier score, and misclassification rate."""

from __future__ import annotations

import numpy as np


def _as_binary(truths) -> np.ndarray:
    t = np.asarray(truths)
    if t.dtype == bool:
        return t.astype(np.int64)
    t = t.astype(np.int64)
    if not np.all((t == 0) | (t == 1)):
        raise ValueError("truths must be 0/1 indicators")
    return t


def auc(scores, truths) -> float | None:
    """Pair-counting AUC: wins plus half-ties over positive-negative pairs.

    Returns None when either class is absent (the area is undefined).
    """
    s = np.asarray(scores, dtype=np.float64)
    t = _as_binary(truths)
    pos = s[t == 1]
    neg = s[t == 0]
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        return None
    wins = np.sum(pos[:, None] > neg[None, :])
    ties = np.sum(pos[:, None] == neg[None, :])
    return float((wins + 0.5 * ties) / (pos.shape[0] * neg.shape[0]))


def roc_curve(scores, truths) -> tuple:
    """ROC points (fpr, tpr) swept over descending score thresholds.

    Tied scores move as a block, which keeps the trapezoidal area equal to
    the pair-counting AUC.
    """
    s = np.asarray(scores, dtype=np.float64)
    t = _as_binary(truths)
    n_pos = int(np.sum(t == 1))
    n_neg = int(np.sum(t == 0))
    order = np.argsort(-s, kind="mergesort")
    s_sorted = s[order]
    t_sorted = t[order]
    tp = np.cumsum(t_sorted)
    fp = np.cumsum(1 - t_sorted)
    # keep only the last point of each tied-score block
    last = np.nonzero(np.diff(np.concatenate([s_sorted, [np.nan]])) != 0)[0]
    tpr = np.concatenate(([0.0], tp[last] / max(n_pos, 1)))
    fpr = np.concatenate(([0.0], fp[last] / max(n_neg, 1)))
    return fpr, tpr


def auc_trapezoid(scores, truths) -> float | None:
    """Trapezoidal area under the empirical ROC curve (cross-check form)."""
    t = _as_binary(truths)
    if np.all(t == 1) or np.all(t == 0):
        return None
    fpr, tpr = roc_curve(scores, truths)
    return float(np.trapezoid(tpr, fpr))


def brier(scores, truths) -> float:
    """Mean squared deviation of the positive-class score from the outcome."""
    s = np.asarray(scores, dtype=np.float64)
    t = _as_binary(truths)
    if s.shape[0] == 0:
        raise ValueError("brier needs at least one prediction")
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("scores must lie in [0, 1]")
    return float(np.mean((s - t) ** 2))


def error_rate(predicted, truth) -> float:
    """Fraction of label mismatches."""
    pred = list(predicted)
    true = list(truth)
    if len(pred) != len(true):
        raise ValueError(f"length mismatch: {len(pred)} predictions, {len(true)} truths")
    if not pred:
        raise ValueError("error_rate needs at least one prediction")
    return sum(p != t for p, t in zip(pred, true)) / len(pred)
