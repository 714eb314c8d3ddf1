"""Command-line interface: train, predict, evaluate, compare, synth, export.

Exit codes: 0 success, 1 usage error, 2 data/validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from ._params import GrowParams
from .bootstrap import bootstrap_compare, default_algorithms, runs_to_csv, summarize
from .data import DataError, dataset_to_json, load_dataset
from .metrics import auc, brier, error_rate
from .synth import PRESETS, generate
from .tree import export, grow, predict, tree_from_json, tree_to_json

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _add_grow_flags(p):
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance level of the histogram routing test")
    p.add_argument("--max-depth", type=int, default=10)
    p.add_argument("--min-node-size", type=int, default=5)
    p.add_argument("--min-delta", type=float, default=0.0)
    p.add_argument("--min-child-size", type=int, default=1)
    p.add_argument("--max-references", type=int, default=None,
                   help="cap on histogram references tried per column per node")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weighted-ranks", action="store_true",
                   help="weight histogram rank samples by bin frequency")


def _params_from(args) -> GrowParams:
    return GrowParams(
        alpha=args.alpha,
        max_depth=args.max_depth,
        min_node_size=args.min_node_size,
        min_delta=args.min_delta,
        min_child_size=args.min_child_size,
        max_references=args.max_references,
        seed=args.seed,
        weighted_ranks=args.weighted_ranks,
    )


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    tree = grow(dataset, _params_from(args))
    _write(args.out, tree_to_json(tree))
    sys.stdout.write(export(tree, "table"))
    return 0


def _load_tree(path):
    with open(path, "r", encoding="utf-8") as fh:
        return tree_from_json(fh.read())


def _cmd_predict(args) -> int:
    tree = _load_tree(args.tree)
    dataset = load_dataset(args.data)
    labels, post = predict(tree, dataset)
    buf = io.StringIO()
    header = ["row", "truth", "predicted"] + [f"p_{lab}" for lab in tree.class_labels]
    buf.write(",".join(header) + "\n")
    for i in range(dataset.n):
        probs = [repr(float(v)) for v in post[i]]
        buf.write(",".join([str(i), dataset.y[i], labels[i]] + probs) + "\n")
    _write(args.out, buf.getvalue())
    return 0


def _cmd_evaluate(args) -> int:
    with open(args.scores, "r", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DataError("scores file has no rows")
    prob_cols = [c for c in rows[0] if c.startswith("p_")]
    if not prob_cols or "truth" not in rows[0] or "predicted" not in rows[0]:
        raise DataError("scores file needs 'truth', 'predicted', and p_<class> columns")
    positive = args.positive
    if positive is None:
        positive = prob_cols[1][2:] if len(prob_cols) > 1 else prob_cols[0][2:]
    col = f"p_{positive}"
    if col not in rows[0]:
        raise DataError(f"no column {col!r} in scores file")
    scores = [float(r[col]) for r in rows]
    truths = [r["truth"] == positive for r in rows]
    predicted = [r["predicted"] for r in rows]
    actual = [r["truth"] for r in rows]
    result = {
        "n": len(rows),
        "positive": positive,
        "auc": auc(scores, truths),
        "brier": brier(scores, truths),
        "error_rate": error_rate(predicted, actual),
    }
    _write(args.out, json.dumps(result, indent=2) + "\n")
    return 0


def _cmd_compare(args) -> int:
    dataset = load_dataset(args.data)
    samples = bootstrap_compare(
        dataset,
        algorithms=default_algorithms(),
        B=args.B,
        params=_params_from(args),
        seed=args.seed,
        positive=args.positive,
        threads=args.threads,
    )
    _write(args.out, runs_to_csv(samples))
    if args.summary is not None:
        _write(args.summary, json.dumps(summarize(samples), indent=2) + "\n")
    return 0


def _cmd_synth(args) -> int:
    make = PRESETS[args.preset]
    spec = make(n_per_class=args.n_per_class, seed=args.seed)
    _write(args.out, dataset_to_json(generate(spec)))
    return 0


def _cmd_export(args) -> int:
    tree = _load_tree(args.tree)
    _write(args.out, export(tree, args.format))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="mvtree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="grow a tree and write it as JSON")
    p.add_argument("--data", required=True, help="dataset JSON (or all-point CSV)")
    p.add_argument("--out", required=True, help="output tree JSON path")
    _add_grow_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="score a dataset with a trained tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="AUC/Brier/error from a predictions CSV")
    p.add_argument("--scores", required=True, help="CSV written by 'predict'")
    p.add_argument("--positive", default=None, help="positive class label")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("compare", help="bootstrap comparison of all algorithms")
    p.add_argument("--data", required=True)
    p.add_argument("--B", type=int, default=100, help="bootstrap replications")
    p.add_argument("--out", required=True, help="runs CSV path")
    p.add_argument("--summary", default=None, help="summary JSON path")
    p.add_argument("--positive", default=None)
    p.add_argument("--threads", type=int, default=1)
    _add_grow_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--preset", required=True, choices=sorted(PRESETS))
    p.add_argument("--n-per-class", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("export", help="render a tree JSON as table/dot/json")
    p.add_argument("--tree", required=True)
    p.add_argument("--format", required=True, choices=["table", "dot", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        sys.stderr.write(f"mvtree: {exc}\n")
        return DATA_EXIT
    except FileNotFoundError as exc:
        sys.stderr.write(f"mvtree: {exc}\n")
        return DATA_EXIT


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
