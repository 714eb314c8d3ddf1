"""Bootstrap comparison harness: resample, refit every algorithm, score
out-of-bag, and emit tidy per-replication metric rows."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._params import GrowParams
from .baselines import ALL_BASELINES, BaselineSpec, cart_grow, preprocess
from .data import DataError, Dataset
from .metrics import auc, brier, error_rate
from .tree import Tree, grow, predict

DCLASS_NAME = "DCLASS"


@dataclass(frozen=True)
class Algorithm:
    """A named training recipe: the multivalued tree or one baseline."""

    name: str
    baseline: BaselineSpec | None = None  # None = multivalued tree


def default_algorithms() -> tuple:
    return (Algorithm(DCLASS_NAME),) + tuple(
        Algorithm(b.name, baseline=b) for b in ALL_BASELINES
    )


@dataclass(frozen=True)
class MetricSample:
    """One bootstrap replication's scores for one algorithm.

    Metrics are None when the out-of-bag set cannot support them (single
    class for AUC, empty set for everything).
    """

    algorithm: str
    replication: int
    auc: float | None
    brier: float | None
    error_rate: float | None


def fit_algorithm(algo: Algorithm, dataset: Dataset, params: GrowParams) -> Tree:
    if algo.baseline is None:
        return grow(dataset, params)
    return cart_grow(preprocess(dataset, algo.baseline), params)


def score_tree(tree: Tree, algo: Algorithm, dataset: Dataset, positive: str):
    """Predicted labels and positive-class posterior scores on a dataset."""
    eval_ds = dataset if algo.baseline is None else preprocess(dataset, algo.baseline)
    labels, post = predict(tree, eval_ds)
    pos_col = tree.class_labels.index(positive)
    return labels, post[:, pos_col]


def _one_replication(dataset, algo, algo_index, b, params, seed, positive):
    rng = np.random.default_rng([seed, b, algo_index])
    n = dataset.n
    idx = rng.integers(0, n, size=n)
    oob = np.setdiff1d(np.arange(n), idx)
    if oob.shape[0] == 0:
        return MetricSample(algo.name, b, None, None, None)
    train = dataset.take(idx)
    tree = fit_algorithm(algo, train, params)
    test = dataset.take(oob)
    labels, scores = score_tree(tree, algo, test, positive)
    truths = np.array([lab == positive for lab in test.y])
    return MetricSample(
        algorithm=algo.name,
        replication=b,
        auc=auc(scores, truths),
        brier=brier(scores, truths),
        error_rate=error_rate(labels, test.y),
    )


def bootstrap_compare(
    dataset: Dataset,
    algorithms=None,
    B: int = 100,
    params: GrowParams | None = None,
    seed: int = 0,
    positive: str | None = None,
    threads: int = 1,
) -> list:
    """Compare algorithms over B bootstrap replications.

    Each (algorithm, replication) pair draws its own bootstrap sample,
    seeded by (seed, replication, algorithm index), trains on it, and
    scores the out-of-bag rows. Output order and values are independent of
    the thread count.
    """
    if params is None:
        params = GrowParams()
    if B < 1:
        raise ValueError("B must be at least 1")
    if len(set(dataset.y)) < 2:
        raise DataError("bootstrap comparison needs at least two classes in the response")
    if algorithms is None:
        algorithms = default_algorithms()
    if positive is None:
        positive = dataset.class_labels[1]
    if positive not in dataset.class_labels:
        raise DataError(f"positive class {positive!r} not among class labels")

    tasks = [
        (ai, algo, b)
        for ai, algo in enumerate(algorithms)
        for b in range(B)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    lambda t: _one_replication(dataset, t[1], t[0], t[2], params, seed, positive),
                    tasks,
                )
            )
    else:
        results = [
            _one_replication(dataset, algo, ai, b, params, seed, positive)
            for ai, algo, b in tasks
        ]
    return results


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def runs_to_csv(samples) -> str:
    buf = io.StringIO()
    buf.write("algorithm,replication,auc,brier,error_rate\n")
    for s in samples:
        buf.write(
            f"{s.algorithm},{s.replication},{_fmt(s.auc)},{_fmt(s.brier)},{_fmt(s.error_rate)}\n"
        )
    return buf.getvalue()


def _metric_summary(values) -> dict:
    present = [v for v in values if v is not None]
    out = {"n": len(present), "n_absent": len(values) - len(present)}
    if present:
        arr = np.asarray(present)
        q25, q50, q75 = np.percentile(arr, [25, 50, 75])
        out.update(median=float(q50), iqr=float(q75 - q25))
    else:
        out.update(median=None, iqr=None)
    return out


def summarize(samples) -> dict:
    """Per-algorithm median/IQR of each metric, absent replications counted."""
    by_algo: dict[str, list] = {}
    for s in samples:
        by_algo.setdefault(s.algorithm, []).append(s)
    out = {}
    for name, rows in by_algo.items():
        rows = sorted(rows, key=lambda s: s.replication)
        out[name] = {
            "auc": _metric_summary([s.auc for s in rows]),
            "brier": _metric_summary([s.brier for s in rows]),
            "error_rate": _metric_summary([s.error_rate for s in rows]),
        }
    return out
