"""Ternary classification-tree growth, prediction, and export.

Node ids follow the arithmetic numbering rule: the children of node f sit
at 3(f-1) + {2, 3, 4}. Binary (point/categorical) splits use offsets
{2, 3}; ternary splits reserve all three slots even when a branch ends up
empty, so ids always encode the path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._params import GrowParams
from .data import (
    CATEGORICAL,
    HISTOGRAM,
    INTERVAL,
    POINT,
    DataError,
    Dataset,
    Histogram,
    Interval,
    SchemaError,
)
from .splitting import (
    Branch,
    HistogramRef,
    IntervalRef,
    NominalSubset,
    PointCut,
    SplitSpec,
    best_split,
    route_cell,
    route_rows,
)

TREE_FORMAT = "mvtree-tree/1"

_TERNARY_OFFSETS = {Branch.LEFT: 2, Branch.CENTER: 3, Branch.RIGHT: 4}
_BINARY_OFFSETS = {Branch.LEFT: 2, Branch.RIGHT: 3}


def child_id(father: int, branch: Branch, ternary: bool = True) -> int:
    """Node number of a child: 3(father - 1) + offset."""
    offsets = _TERNARY_OFFSETS if ternary else _BINARY_OFFSETS
    return 3 * (father - 1) + offsets[branch]


@dataclass
class TreeNode:
    id: int
    size: int
    class_counts: np.ndarray
    rt: float
    assigned_class: str
    father: int | None
    split: SplitSpec | None = None
    children: dict = field(default_factory=dict)  # Branch -> node id

    @property
    def is_leaf(self) -> bool:
        return self.split is None


@dataclass
class Tree:
    nodes: dict  # id -> TreeNode
    params: GrowParams
    class_labels: tuple
    schema: tuple  # of (name, kind)

    @property
    def root(self) -> TreeNode:
        return self.nodes[1]

    def leaves(self):
        return [n for n in self.nodes.values() if n.is_leaf]

    def resubstitution_error(self) -> float:
        """Size-weighted misclassification ratio over the leaves."""
        total = self.root.size
        return sum(n.size * n.rt for n in self.nodes.values() if n.is_leaf) / total


def grow(dataset: Dataset, params: GrowParams | None = None) -> Tree:
    """Recursive depth-first partitioning with the configured stopping rules.

    A node becomes a leaf when it is pure, smaller than ``min_node_size``,
    at ``max_depth``, or when no admissible split reaches ``min_delta``.
    """
    if params is None:
        params = GrowParams()
    if dataset.n < 1:
        raise DataError("cannot grow a tree on an empty dataset")
    labels = dataset.class_labels
    y = dataset.y_codes
    nodes: dict[int, TreeNode] = {}

    def build(rows: np.ndarray, node_id: int, depth: int, father: int | None):
        counts = np.bincount(y[rows], minlength=len(labels))
        size = int(rows.shape[0])
        node = TreeNode(
            id=node_id,
            size=size,
            class_counts=counts,
            rt=1.0 - counts.max() / size,
            assigned_class=labels[int(np.argmax(counts))],
            father=father,
        )
        nodes[node_id] = node
        if counts.max() == size or size < params.min_node_size or depth >= params.max_depth:
            return
        cand = best_split(rows, dataset, params, node_id)
        if cand is None or cand.delta < params.min_delta:
            return
        node.split = cand.spec
        parts = route_rows(rows, dataset, cand.spec)
        for branch in Branch:
            child_rows = parts.get(branch)
            if child_rows is None or child_rows.shape[0] == 0:
                continue
            cid = child_id(node_id, branch, cand.spec.ternary)
            node.children[branch] = cid
            build(child_rows, cid, depth + 1, node_id)

    build(np.arange(dataset.n, dtype=np.int64), 1, 1, None)
    return Tree(nodes=nodes, params=params, class_labels=labels, schema=dataset.schema())


def _check_schema(tree: Tree, dataset: Dataset):
    if dataset.schema() != tree.schema:
        raise SchemaError(
            f"dataset columns {dataset.schema()} do not match the columns the "
            f"tree was trained on {tree.schema}"
        )


def predict_row(tree: Tree, cells) -> tuple:
    """Slide one object down the tree; returns (label, posterior).

    The posterior is the class-count proportion vector of the final node.
    A branch with no trained child stops the descent at the current node.
    """
    node = tree.root
    while node.split is not None:
        branch = route_cell(cells[node.split.predictor_index], node.split)
        nxt = node.children.get(branch)
        if nxt is None:
            break
        node = tree.nodes[nxt]
    posterior = node.class_counts / node.size
    return node.assigned_class, posterior


def predict(tree: Tree, dataset: Dataset) -> tuple:
    """Predict every row; returns (labels list, posterior matrix n x C)."""
    _check_schema(tree, dataset)
    labels = []
    post = np.empty((dataset.n, len(tree.class_labels)))
    for i in range(dataset.n):
        lab, p = predict_row(tree, dataset.row(i))
        labels.append(lab)
        post[i] = p
    return labels, post


# ---------------------------------------------------------------------------
# export


def _hist_moments(h: Histogram) -> dict:
    """Support bounds and frequency-weighted moments of a histogram."""
    mids = h.midpoints
    mean = float(np.sum(h.freqs * mids))
    var = float(np.sum(h.freqs * (mids - mean) ** 2))
    sd = var ** 0.5
    if sd > 0:
        skew = float(np.sum(h.freqs * ((mids - mean) / sd) ** 3))
        kurt = float(np.sum(h.freqs * ((mids - mean) / sd) ** 4))
    else:
        skew, kurt = 0.0, 0.0
    return {
        "min": float(h.edges[0]),
        "max": float(h.edges[-1]),
        "mean": mean,
        "sd": sd,
        "skewness": skew,
        "kurtosis": kurt,
    }


_KIND_TAGS = {POINT: "P", CATEGORICAL: "C", INTERVAL: "I", HISTOGRAM: "H"}


def _split_columns(tree: Tree, node: TreeNode) -> tuple:
    """(predictor label, characteristics) strings for the table renderer."""
    if node.split is None:
        return "Terminal", "-"
    name, col_kind = tree.schema[node.split.predictor_index]
    label = f"{name} ({_KIND_TAGS[col_kind]})"
    kind = node.split.kind
    if isinstance(kind, PointCut):
        chars = f"{kind.cut:g}"
    elif isinstance(kind, NominalSubset):
        chars = "{" + ", ".join(kind.left_levels) + "}"
    elif isinstance(kind, IntervalRef):
        chars = f"[{kind.ref.lower:.2f} {kind.ref.upper:.2f}]"
    else:
        m = _hist_moments(kind.ref)
        chars = (
            f"Min {m['min']:.2f}  Max {m['max']:.2f}  Mean {m['mean']:.2f}  "
            f"SD {m['sd']:.2f}  Skew {m['skewness']:.2f}  Kurt {m['kurtosis']:.2f}"
        )
    return label, chars


def _export_table(tree: Tree) -> str:
    header = ["Node", "Size", "Children", "Father", "Splitting predictor",
              "Splitting characteristics", "Rt", "Class"]
    rows = []
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        children = " ".join(str(node.children[b]) for b in Branch if b in node.children)
        pred, chars = _split_columns(tree, node)
        rows.append([
            str(node.id),
            str(node.size),
            children if children else "-",
            str(node.father) if node.father is not None else "-",
            pred,
            chars,
            f"{node.rt:.2f}",
            node.assigned_class,
        ])
    widths = [max(len(header[k]), *(len(r[k]) for r in rows)) for k in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


_BRANCH_TAGS = {Branch.LEFT: "L", Branch.CENTER: "C", Branch.RIGHT: "R"}


def _export_dot(tree: Tree) -> str:
    lines = ["digraph tree {", "  node [shape=box];"]
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        pred, _ = _split_columns(tree, node)
        label = f"#{node.id}\\nn={node.size} rt={node.rt:.2f}\\nclass {node.assigned_class}"
        if node.split is not None:
            label += f"\\n{pred}"
        lines.append(f'  n{node.id} [label="{label}"];')
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        for branch in Branch:
            if branch in node.children:
                lines.append(
                    f'  n{node.id} -> n{node.children[branch]} '
                    f'[label="{_BRANCH_TAGS[branch]}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


_BRANCH_NAMES = {Branch.LEFT: "left", Branch.CENTER: "center", Branch.RIGHT: "right"}
_BRANCH_FROM_NAME = {v: k for k, v in _BRANCH_NAMES.items()}


def _split_to_dict(spec: SplitSpec) -> dict:
    out = {"predictor": spec.predictor_index, "kind": spec.kind.tag,
           "reference_row": spec.reference_object}
    kind = spec.kind
    if isinstance(kind, PointCut):
        out["cut"] = kind.cut
    elif isinstance(kind, NominalSubset):
        out["left_levels"] = list(kind.left_levels)
    elif isinstance(kind, IntervalRef):
        out["ref"] = kind.ref.as_cell()
    else:
        out["ref"] = kind.ref.as_cell()
        out["alpha"] = kind.alpha
        out["weighted"] = kind.weighted
    return out


def _split_from_dict(d: dict) -> SplitSpec:
    tag = d["kind"]
    if tag == "point":
        kind = PointCut(float(d["cut"]))
    elif tag == "categorical":
        kind = NominalSubset(tuple(d["left_levels"]))
    elif tag == "interval":
        kind = IntervalRef(Interval(*d["ref"]))
    elif tag == "histogram":
        kind = HistogramRef(
            Histogram.from_bins(d["ref"]["bins"], d["ref"]["freqs"]),
            float(d["alpha"]),
            bool(d.get("weighted", False)),
        )
    else:
        raise DataError(f"unknown split kind {tag!r}")
    return SplitSpec(int(d["predictor"]), kind, d.get("reference_row"))


def tree_to_dict(tree: Tree) -> dict:
    nodes = []
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        nodes.append({
            "id": node.id,
            "size": node.size,
            "counts": [int(c) for c in node.class_counts],
            "rt": node.rt,
            "class": node.assigned_class,
            "split": None if node.split is None else _split_to_dict(node.split),
            "children": {_BRANCH_NAMES[b]: cid for b, cid in node.children.items()},
            "father": node.father,
        })
    p = tree.params
    return {
        "format": TREE_FORMAT,
        "class_labels": list(tree.class_labels),
        "schema": [{"name": n, "kind": k} for n, k in tree.schema],
        "params": {
            "alpha": p.alpha, "max_depth": p.max_depth,
            "min_node_size": p.min_node_size, "min_delta": p.min_delta,
            "min_child_size": p.min_child_size, "max_references": p.max_references,
            "seed": p.seed, "weighted_ranks": p.weighted_ranks,
        },
        "nodes": nodes,
    }


def tree_from_dict(doc: dict) -> Tree:
    if doc.get("format") != TREE_FORMAT:
        raise DataError(f"unsupported tree format {doc.get('format')!r}")
    params = GrowParams(**doc["params"])
    nodes = {}
    for nd in doc["nodes"]:
        node = TreeNode(
            id=int(nd["id"]),
            size=int(nd["size"]),
            class_counts=np.asarray(nd["counts"], dtype=np.int64),
            rt=float(nd["rt"]),
            assigned_class=nd["class"],
            father=nd["father"],
            split=None if nd["split"] is None else _split_from_dict(nd["split"]),
            children={_BRANCH_FROM_NAME[k]: int(v) for k, v in nd["children"].items()},
        )
        nodes[node.id] = node
    return Tree(
        nodes=nodes,
        params=params,
        class_labels=tuple(doc["class_labels"]),
        schema=tuple((c["name"], c["kind"]) for c in doc["schema"]),
    )


def tree_to_json(tree: Tree) -> str:
    return json.dumps(tree_to_dict(tree), indent=2)


def tree_from_json(text: str) -> Tree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed tree JSON: {exc}") from exc
    return tree_from_dict(doc)


def export(tree: Tree, fmt: str) -> str:
    """Render the tree: 'table' (report layout), 'dot' (graphviz), or 'json'."""
    if fmt == "table":
        return _export_table(tree)
    if fmt == "dot":
        return _export_dot(tree)
    if fmt == "json":
        return tree_to_json(tree)
    raise ValueError(f"unknown export format {fmt!r}")
