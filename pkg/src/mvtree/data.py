"""Multivalued data model: point, interval, histogram, and categorical cells.

A dataset is a rectangular table whose columns are type-homogeneous. Cells
are plain floats (point), strings (categorical), ``Interval`` or
``Histogram`` objects. Everything is immutable after construction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

FREQ_SUM_TOL = 1e-6
EDGE_TOL = 1e-9

POINT = "point"
INTERVAL = "interval"
HISTOGRAM = "histogram"
CATEGORICAL = "categorical"
KINDS = (POINT, INTERVAL, HISTOGRAM, CATEGORICAL)


class DataError(ValueError):
    """A dataset, cell, or schema failed validation."""


class SchemaError(DataError):
    """A dataset does not match the schema a model was trained on."""


@dataclass(frozen=True)
class Interval:
    """A closed range observed for one object."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DataError(f"interval bounds must be finite, got [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise DataError(f"interval lower exceeds upper: [{self.lower}, {self.upper}]")

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def as_cell(self):
        return [self.lower, self.upper]


class Histogram:
    """A binned empirical distribution: contiguous bins with frequencies.

    Bins are half-open ``[lower, upper)`` except the last, which is closed
    so the cumulative distribution reaches 1 on the support. Frequencies
    are normalized on construction when their sum is within ``FREQ_SUM_TOL``
    of 1; a larger deviation is rejected.
    """

    __slots__ = ("edges", "freqs", "_key", "_mids", "_cum")

    def __init__(self, edges, freqs):
        edges = np.asarray(edges, dtype=np.float64)
        freqs = np.asarray(freqs, dtype=np.float64)
        if edges.ndim != 1 or freqs.ndim != 1 or edges.shape[0] != freqs.shape[0] + 1:
            raise DataError("histogram needs H+1 edges for H frequencies")
        if freqs.shape[0] < 1:
            raise DataError("histogram needs at least one bin")
        if not np.all(np.isfinite(edges)):
            raise DataError("histogram edges must be finite")
        if np.any(np.diff(edges) <= 0):
            raise DataError("histogram bins must satisfy lower < upper")
        if np.any(freqs < 0) or not np.all(np.isfinite(freqs)):
            raise DataError("histogram frequencies must be finite and non-negative")
        total = float(freqs.sum())
        if abs(total - 1.0) > FREQ_SUM_TOL:
            raise DataError(f"histogram frequencies sum to {total}, expected 1")
        if abs(total - 1.0) > 1e-12:  # skip when already unit: keeps parse idempotent
            freqs = freqs / total
        edges.setflags(write=False)
        freqs.setflags(write=False)
        self.edges = edges
        self.freqs = freqs
        self._key = None
        self._mids = None
        self._cum = None

    @classmethod
    def from_bins(cls, bins, freqs) -> "Histogram":
        """Build from explicit ``[lower, upper]`` bin pairs, checking contiguity."""
        bins = [(float(lo), float(up)) for lo, up in bins]
        if len(bins) < 1:
            raise DataError("histogram needs at least one bin")
        edges = [bins[0][0]]
        for k, (lo, up) in enumerate(bins):
            if k > 0:
                prev_up = bins[k - 1][1]
                tol = EDGE_TOL * max(1.0, abs(prev_up))
                if abs(lo - prev_up) > tol:
                    raise DataError(
                        f"histogram bins must be contiguous: bin {k} starts at {lo}, "
                        f"previous ends at {prev_up}"
                    )
                edges.append(prev_up)
            if k == len(bins) - 1:
                edges.append(up)
        return cls(np.asarray(edges), freqs)

    @property
    def H(self) -> int:
        return len(self.freqs)

    @property
    def midpoints(self) -> np.ndarray:
        if self._mids is None:
            mids = 0.5 * (self.edges[:-1] + self.edges[1:])
            mids.setflags(write=False)
            self._mids = mids
        return self._mids

    @property
    def cumfreqs(self) -> np.ndarray:
        if self._cum is None:
            cum = np.concatenate(([0.0], np.cumsum(self.freqs)))
            cum.setflags(write=False)
            self._cum = cum
        return self._cum

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.edges.tobytes() + self.freqs.tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, Histogram) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Histogram(H={self.H}, support=[{self.edges[0]:g}, {self.edges[-1]:g}])"

    def as_cell(self):
        return {
            "bins": [[float(a), float(b)] for a, b in zip(self.edges[:-1], self.edges[1:])],
            "freqs": [float(f) for f in self.freqs],
        }


# a predictor cell is one of these
MVValue = float | str | Interval | Histogram


def ecdf_eval(h: Histogram, u: float) -> float:
    """Piecewise-linear cumulative value of the histogram at ``u``.

    0 below the support, 1 at and above the last upper bound, linear within
    each bin.
    """
    edges = h.edges
    if u < edges[0]:
        return 0.0
    if u >= edges[-1]:
        return 1.0
    k = int(np.searchsorted(edges, u, side="right")) - 1
    width = edges[k + 1] - edges[k]
    return float(h.cumfreqs[k] + h.freqs[k] * (u - edges[k]) / width)


def reduce_interval(v: Interval, mode: str) -> float:
    """Collapse an interval to a scalar: its lower bound, upper bound, or midpoint."""
    if mode == "lower":
        return v.lower
    if mode == "upper":
        return v.upper
    if mode == "mean":
        return v.mid
    raise ValueError(f"unknown interval reduction {mode!r}")


def reduce_histogram(h: Histogram, mode: str) -> float:
    """Collapse a histogram to a scalar: its mean or grouped-data median.

    The mean weights bin midpoints by frequency. The median inverts the
    piecewise-linear ECDF at 0.5 (first point where it is reached).
    """
    if mode == "mean":
        return float(np.sum(h.freqs * h.midpoints))
    if mode == "median":
        cum = 0.0
        for k in range(h.H):
            f = h.freqs[k]
            if cum + f >= 0.5:
                if f == 0.0:
                    return float(h.edges[k])
                return float(h.edges[k] + (0.5 - cum) / f * (h.edges[k + 1] - h.edges[k]))
            cum += f
        return float(h.edges[-1])
    raise ValueError(f"unknown histogram reduction {mode!r}")


@dataclass(frozen=True)
class PointColumn:
    name: str
    values: np.ndarray  # float64

    kind = POINT

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(v)):
            raise DataError(f"column {self.name!r}: point values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def cell(self, i):
        return float(self.values[i])

    def take(self, idx):
        return PointColumn(self.name, self.values[idx])


@dataclass(frozen=True)
class CategoricalColumn:
    name: str
    values: tuple  # of str

    kind = CATEGORICAL

    @cached_property
    def levels(self) -> tuple:
        return tuple(sorted(set(self.values)))

    @cached_property
    def codes(self) -> np.ndarray:
        lookup = {lev: k for k, lev in enumerate(self.levels)}
        codes = np.array([lookup[v] for v in self.values], dtype=np.int64)
        codes.setflags(write=False)
        return codes

    def cell(self, i):
        return self.values[i]

    def take(self, idx):
        return CategoricalColumn(self.name, tuple(self.values[i] for i in idx))


@dataclass(frozen=True)
class IntervalColumn:
    name: str
    cells: tuple  # of Interval

    kind = INTERVAL

    @cached_property
    def lowers(self) -> np.ndarray:
        a = np.array([c.lower for c in self.cells])
        a.setflags(write=False)
        return a

    @cached_property
    def uppers(self) -> np.ndarray:
        a = np.array([c.upper for c in self.cells])
        a.setflags(write=False)
        return a

    def cell(self, i):
        return self.cells[i]

    def take(self, idx):
        return IntervalColumn(self.name, tuple(self.cells[i] for i in idx))


@dataclass(frozen=True)
class HistogramColumn:
    name: str
    cells: tuple  # of Histogram

    kind = HISTOGRAM

    @cached_property
    def _flat(self):
        """Ragged midpoint storage for the routing kernels."""
        lengths = np.array([c.H for c in self.cells], dtype=np.int64)
        starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
        flat = np.concatenate([c.midpoints for c in self.cells]) if self.cells else np.empty(0)
        wflat = np.concatenate([c.freqs * c.H for c in self.cells]) if self.cells else np.empty(0)
        for a in (lengths, starts, flat, wflat):
            a.setflags(write=False)
        return flat, wflat, starts, lengths

    @property
    def flat_midpoints(self):
        return self._flat[0]

    @property
    def flat_weights(self):
        return self._flat[1]

    @property
    def starts(self):
        return self._flat[2]

    @property
    def lengths(self):
        return self._flat[3]

    def cell(self, i):
        return self.cells[i]

    def take(self, idx):
        return HistogramColumn(self.name, tuple(self.cells[i] for i in idx))


Column = PointColumn | CategoricalColumn | IntervalColumn | HistogramColumn


@dataclass(frozen=True)
class Dataset:
    """n objects described by typed predictor columns and a class label each."""

    columns: tuple
    y: tuple  # of str
    class_labels: tuple  # of str, in declaration order

    def __post_init__(self):
        n = len(self.y)
        if n < 1:
            raise DataError("dataset must contain at least one row")
        for col in self.columns:
            m = len(col.values) if col.kind in (POINT, CATEGORICAL) else len(col.cells)
            if m != n:
                raise DataError(f"column {col.name!r} has {m} cells for {n} rows")
        known = set(self.class_labels)
        if len(known) != len(self.class_labels):
            raise DataError("class_labels must be distinct")
        for lab in self.y:
            if lab not in known:
                raise DataError(f"response label {lab!r} not in class_labels")

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def P(self) -> int:
        return len(self.columns)

    @cached_property
    def y_codes(self) -> np.ndarray:
        lookup = {lab: k for k, lab in enumerate(self.class_labels)}
        codes = np.array([lookup[lab] for lab in self.y], dtype=np.int64)
        codes.setflags(write=False)
        return codes

    def schema(self) -> tuple:
        return tuple((c.name, c.kind) for c in self.columns)

    def row(self, i) -> tuple:
        return tuple(c.cell(i) for c in self.columns)

    def take(self, indices) -> "Dataset":
        """Row subset/resample (repeats allowed); keeps class_labels."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            columns=tuple(c.take(idx) for c in self.columns),
            y=tuple(self.y[i] for i in idx),
            class_labels=self.class_labels,
        )

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y_codes, minlength=len(self.class_labels))


def _cell_kind(cell) -> str:
    if isinstance(cell, bool):
        raise DataError(f"cell {cell!r} is not a valid value")
    if isinstance(cell, (int, float)):
        return POINT
    if isinstance(cell, str):
        return CATEGORICAL
    if isinstance(cell, list):
        if len(cell) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in cell):
            return INTERVAL
        raise DataError(f"array cell must be a 2-element [lower, upper], got {cell!r}")
    if isinstance(cell, dict):
        if set(cell) == {"bins", "freqs"}:
            return HISTOGRAM
        raise DataError(f"object cell must have exactly the keys 'bins' and 'freqs', got {sorted(cell)}")
    raise DataError(f"unrecognized cell {cell!r}")


def _decode_cell(cell, kind):
    if kind == POINT:
        v = float(cell)
        if not math.isfinite(v):
            raise DataError(f"point cell must be finite, got {cell!r}")
        return v
    if kind == CATEGORICAL:
        return cell
    if kind == INTERVAL:
        return Interval(float(cell[0]), float(cell[1]))
    return Histogram.from_bins(cell["bins"], cell["freqs"])


def parse_dataset(text: str) -> Dataset:
    """Parse the JSON dataset document into a validated ``Dataset``.

    Top-level keys: ``class_labels``, ``predictors`` (name/kind records) and
    ``rows`` (each with a label ``y`` and a cell list ``x``). Cell shapes
    must agree with the declared column kinds and be homogeneous per column.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError("dataset document must be a JSON object")
    for key in ("class_labels", "predictors", "rows"):
        if key not in doc:
            raise DataError(f"dataset document missing {key!r}")
    class_labels = tuple(doc["class_labels"])
    if not class_labels:
        raise DataError("class_labels must be non-empty")
    preds = doc["predictors"]
    for p in preds:
        if not isinstance(p, dict) or "name" not in p or "kind" not in p:
            raise DataError("each predictor needs 'name' and 'kind'")
        if p["kind"] not in KINDS:
            raise DataError(f"unknown predictor kind {p['kind']!r}")
    rows = doc["rows"]
    if not rows:
        raise DataError("dataset must contain at least one row")

    y = []
    cells_by_col = [[] for _ in preds]
    for r, row in enumerate(rows):
        if "y" not in row:
            raise DataError(f"row {r}: missing response 'y'")
        y.append(row["y"])
        x = row.get("x", [])
        if len(x) != len(preds):
            raise DataError(f"row {r}: expected {len(preds)} cells, got {len(x)}")
        for c, cell in enumerate(x):
            kind = _cell_kind(cell)
            declared = preds[c]["kind"]
            if kind != declared:
                raise DataError(
                    f"row {r}, column {preds[c]['name']!r}: cell looks like "
                    f"{kind} but column is declared {declared}"
                )
            try:
                cells_by_col[c].append(_decode_cell(cell, kind))
            except DataError as exc:
                raise DataError(f"row {r}, column {preds[c]['name']!r}: {exc}") from exc

    columns = []
    for p, cells in zip(preds, cells_by_col):
        kind = p["kind"]
        if kind == POINT:
            columns.append(PointColumn(p["name"], np.array(cells)))
        elif kind == CATEGORICAL:
            columns.append(CategoricalColumn(p["name"], tuple(cells)))
        elif kind == INTERVAL:
            columns.append(IntervalColumn(p["name"], tuple(cells)))
        else:
            columns.append(HistogramColumn(p["name"], tuple(cells)))
    return Dataset(tuple(columns), tuple(y), class_labels)


def parse_csv_dataset(text: str) -> Dataset:
    """Parse an all-point CSV: header row, last column is the response.

    Class labels are taken in order of first appearance.
    """
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r]
    if len(rows) < 2:
        raise DataError("CSV needs a header row and at least one data row")
    header = rows[0]
    if len(header) < 2:
        raise DataError("CSV needs at least one predictor column and a response")
    names = header[:-1]
    values = []
    y = []
    for r, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataError(f"CSV row {r + 1}: expected {len(header)} fields, got {len(row)}")
        try:
            values.append([float(v) for v in row[:-1]])
        except ValueError as exc:
            raise DataError(f"CSV row {r + 1}: non-numeric predictor value ({exc})") from exc
        y.append(row[-1])
    labels = []
    for lab in y:
        if lab not in labels:
            labels.append(lab)
    arr = np.asarray(values)
    columns = tuple(PointColumn(name, arr[:, k]) for k, name in enumerate(names))
    return Dataset(columns, tuple(y), tuple(labels))


def load_dataset(path: str) -> Dataset:
    """Load a dataset file, dispatching on extension (.csv vs JSON)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if str(path).lower().endswith(".csv"):
        return parse_csv_dataset(text)
    return parse_dataset(text)


def _encode_cell(cell):
    if isinstance(cell, float):
        return cell
    if isinstance(cell, str):
        return cell
    return cell.as_cell()


def dataset_to_dict(ds: Dataset) -> dict:
    return {
        "class_labels": list(ds.class_labels),
        "predictors": [{"name": c.name, "kind": c.kind} for c in ds.columns],
        "rows": [
            {"y": ds.y[i], "x": [_encode_cell(c.cell(i)) for c in ds.columns]}
            for i in range(ds.n)
        ],
    }


def dataset_to_json(ds: Dataset) -> str:
    return json.dumps(dataset_to_dict(ds), indent=None, separators=(",", ":"))
