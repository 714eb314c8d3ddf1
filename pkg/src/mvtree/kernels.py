"""Hot numeric kernels, compiled with numba when available.

The pairwise rank-sum routing of histogram cells is the dominant cost of
tree growth (O(n^2) tests per histogram column per node), so it lives here
in a form numba can compile. A pure-numpy twin of every kernel is kept and
selected by setting ``MVTREE_NUMBA=0`` in the environment (or automatically
when numba is not importable). Both paths run the same arithmetic in the
same order and are asserted equal in the test suite and in
``benchmarks/bench_kernels.py``.

Branch codes: 0 = left, 1 = center, 2 = right.
"""

import math
import os
from types import SimpleNamespace

import numpy as np

LEFT_CODE = 0
CENTER_CODE = 1
RIGHT_CODE = 2

_SQRT2 = math.sqrt(2.0)


def _rank_sum_impl(ref, other):
    """Midrank sum of ``ref`` inside the merged sample ref+other."""
    merged = np.concatenate((ref, other))
    merged.sort()
    lo = np.searchsorted(merged, ref, side="left")
    hi = np.searchsorted(merged, ref, side="right")
    total = 0.0
    for k in range(ref.shape[0]):
        total += 0.5 * (lo[k] + hi[k] + 1)
    return total


def _weighted_rank_sum_impl(values, weights, ref_len):
    """Weighted midrank sum of the first ``ref_len`` entries of ``values``.

    Each observation occupies a rank-axis block of width equal to its
    weight; tied values share the midrank of their pooled block. With all
    weights 1 this reduces exactly to the unweighted midrank sum.
    """
    n = values.shape[0]
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(n)
    cum = 0.0
    i = 0
    while i < n:
        j = i
        group_w = 0.0
        while j < n and values[order[j]] == values[order[i]]:
            group_w += weights[order[j]]
            j += 1
        mid = cum + 0.5 * (group_w + 1.0)
        for k in range(i, j):
            ranks[order[k]] = mid
        cum += group_w
        i = j
    total = 0.0
    for k in range(ref_len):
        total += weights[k] * ranks[k]
    return total


def _route_pair_impl(ref, obj, alpha):
    """Branch code for ``obj`` routed against the reference sample ``ref``.

    T is the studentized rank sum of the reference sample within the merged
    sample; p is the two-sided normal tail probability.
    """
    h_i = float(ref.shape[0])
    h_j = float(obj.shape[0])
    var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
    if var <= 0.0:
        return CENTER_CODE
    merged = np.concatenate((ref, obj))
    merged.sort()
    lo = np.searchsorted(merged, ref, side="left")
    hi = np.searchsorted(merged, ref, side="right")
    w = 0.0
    for k in range(ref.shape[0]):
        w += 0.5 * (lo[k] + hi[k] + 1)
    t = (w - h_i * (h_i + h_j + 1.0) / 2.0) / math.sqrt(var)
    p = math.erfc(abs(t) / _SQRT2)
    if t < 0.0 and p < alpha:
        return LEFT_CODE
    if t > 0.0 and p < alpha:
        return RIGHT_CODE
    return CENTER_CODE


def _weighted_route_pair_impl(ref, ref_w, obj, obj_w, alpha):
    """Weighted twin of ``_route_pair_impl`` (weight totals act as sizes).

    The weighted midrank logic is inlined; kernels stay self-contained so
    the numba disk cache works.
    """
    h_i = 0.0
    for k in range(ref_w.shape[0]):
        h_i += ref_w[k]
    h_j = 0.0
    for k in range(obj_w.shape[0]):
        h_j += obj_w[k]
    var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
    if var <= 0.0:
        return CENTER_CODE
    values = np.concatenate((ref, obj))
    weights = np.concatenate((ref_w, obj_w))
    n = values.shape[0]
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(n)
    cum = 0.0
    i = 0
    while i < n:
        j = i
        group_w = 0.0
        while j < n and values[order[j]] == values[order[i]]:
            group_w += weights[order[j]]
            j += 1
        mid = cum + 0.5 * (group_w + 1.0)
        for k in range(i, j):
            ranks[order[k]] = mid
        cum += group_w
        i = j
    w = 0.0
    for k in range(ref.shape[0]):
        w += weights[k] * ranks[k]
    t = (w - h_i * (h_i + h_j + 1.0) / 2.0) / math.sqrt(var)
    p = math.erfc(abs(t) / _SQRT2)
    if t < 0.0 and p < alpha:
        return LEFT_CODE
    if t > 0.0 and p < alpha:
        return RIGHT_CODE
    return CENTER_CODE


def _route_matrix_impl(flat, starts, lengths, ref_rows, obj_rows, alpha):
    """Branch-code matrix: entry [i, j] routes obj_rows[j] against ref_rows[i].

    ``flat``/``starts``/``lengths`` hold the ragged per-row midpoint arrays
    of one histogram column; each row segment must be sorted ascending
    (histogram midpoints are). The pair logic is inlined (self-contained
    functions keep the numba cache usable).
    """
    out = np.empty((ref_rows.shape[0], obj_rows.shape[0]), dtype=np.int8)
    for i in range(ref_rows.shape[0]):
        r = ref_rows[i]
        ref = flat[starts[r]:starts[r] + lengths[r]]
        h_i = float(ref.shape[0])
        for j in range(obj_rows.shape[0]):
            o = obj_rows[j]
            obj = flat[starts[o]:starts[o] + lengths[o]]
            h_j = float(obj.shape[0])
            var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
            if var <= 0.0:
                out[i, j] = CENTER_CODE
                continue
            merged = np.concatenate((ref, obj))
            merged.sort()
            lo = np.searchsorted(merged, ref, side="left")
            hi = np.searchsorted(merged, ref, side="right")
            w = 0.0
            for k in range(ref.shape[0]):
                w += 0.5 * (lo[k] + hi[k] + 1)
            t = (w - h_i * (h_i + h_j + 1.0) / 2.0) / math.sqrt(var)
            p = math.erfc(abs(t) / _SQRT2)
            if t < 0.0 and p < alpha:
                out[i, j] = LEFT_CODE
            elif t > 0.0 and p < alpha:
                out[i, j] = RIGHT_CODE
            else:
                out[i, j] = CENTER_CODE
    return out


def _route_matrix_numpy(flat, starts, lengths, ref_rows, obj_rows, alpha):
    """Numpy twin of ``_route_matrix_impl`` without the merged sort.

    For sorted row segments the merged midrank sum of the reference splits
    into its self-rank mass (a constant per reference) plus cross counts
    from two searchsorted calls, so W here is bit-identical to the merged
    computation while skipping the per-pair concatenate+sort.
    """
    n_ref, n_obj = ref_rows.shape[0], obj_rows.shape[0]
    out = np.empty((n_ref, n_obj), dtype=np.int8)
    h_j = lengths[obj_rows].astype(np.float64)
    objs = [flat[starts[o]:starts[o] + lengths[o]] for o in obj_rows]
    for i in range(n_ref):
        r = ref_rows[i]
        ref = flat[starts[r]:starts[r] + lengths[r]]
        h_i = float(ref.shape[0])
        lo_self = np.searchsorted(ref, ref, side="left")
        hi_self = np.searchsorted(ref, ref, side="right")
        w_self = 0.5 * float(np.sum(lo_self + hi_self + 1))
        cross = np.empty(n_obj)
        for j, obj in enumerate(objs):
            cross[j] = np.searchsorted(obj, ref, side="left").sum() + \
                np.searchsorted(obj, ref, side="right").sum()
        w = w_self + 0.5 * cross
        var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(var > 0.0, (w - h_i * (h_i + h_j + 1.0) / 2.0) / np.sqrt(var), 0.0)
        p = _erfc_vec(np.abs(t) / _SQRT2)
        codes = np.full(n_obj, np.int8(CENTER_CODE))
        codes[(t < 0.0) & (p < alpha)] = LEFT_CODE
        codes[(t > 0.0) & (p < alpha)] = RIGHT_CODE
        out[i] = codes
    return out


_erfc_vec = np.vectorize(math.erfc, otypes=[np.float64])


def _weighted_route_matrix_impl(flat, wflat, starts, lengths, ref_rows, obj_rows, alpha):
    out = np.empty((ref_rows.shape[0], obj_rows.shape[0]), dtype=np.int8)
    for i in range(ref_rows.shape[0]):
        r = ref_rows[i]
        ref = flat[starts[r]:starts[r] + lengths[r]]
        ref_w = wflat[starts[r]:starts[r] + lengths[r]]
        h_i = 0.0
        for k in range(ref_w.shape[0]):
            h_i += ref_w[k]
        for j in range(obj_rows.shape[0]):
            o = obj_rows[j]
            obj = flat[starts[o]:starts[o] + lengths[o]]
            obj_w = wflat[starts[o]:starts[o] + lengths[o]]
            h_j = 0.0
            for k in range(obj_w.shape[0]):
                h_j += obj_w[k]
            var = h_i * h_j * (h_i + h_j + 1.0) / 12.0
            if var <= 0.0:
                out[i, j] = CENTER_CODE
                continue
            values = np.concatenate((ref, obj))
            weights = np.concatenate((ref_w, obj_w))
            nm = values.shape[0]
            order = np.argsort(values, kind="mergesort")
            ranks = np.empty(nm)
            cum = 0.0
            a = 0
            while a < nm:
                b = a
                group_w = 0.0
                while b < nm and values[order[b]] == values[order[a]]:
                    group_w += weights[order[b]]
                    b += 1
                mid = cum + 0.5 * (group_w + 1.0)
                for k in range(a, b):
                    ranks[order[k]] = mid
                cum += group_w
                a = b
            w = 0.0
            for k in range(ref.shape[0]):
                w += weights[k] * ranks[k]
            t = (w - h_i * (h_i + h_j + 1.0) / 2.0) / math.sqrt(var)
            p = math.erfc(abs(t) / _SQRT2)
            if t < 0.0 and p < alpha:
                out[i, j] = LEFT_CODE
            elif t > 0.0 and p < alpha:
                out[i, j] = RIGHT_CODE
            else:
                out[i, j] = CENTER_CODE
    return out


NUMPY_IMPLS = SimpleNamespace(
    name="numpy",
    rank_sum=_rank_sum_impl,
    weighted_rank_sum=_weighted_rank_sum_impl,
    route_pair=_route_pair_impl,
    weighted_route_pair=_weighted_route_pair_impl,
    route_matrix=_route_matrix_numpy,
    weighted_route_matrix=_weighted_route_matrix_impl,
)


def _numba_requested():
    flag = os.environ.get("MVTREE_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


def _build_numba_impls():
    from numba import njit

    jit = njit(cache=True, nogil=True)
    return SimpleNamespace(
        name="numba",
        rank_sum=jit(_rank_sum_impl),
        weighted_rank_sum=jit(_weighted_rank_sum_impl),
        route_pair=jit(_route_pair_impl),
        weighted_route_pair=jit(_weighted_route_pair_impl),
        route_matrix=jit(_route_matrix_impl),
        weighted_route_matrix=jit(_weighted_route_matrix_impl),
    )


NUMBA_IMPLS = None
if _numba_requested():
    try:
        NUMBA_IMPLS = _build_numba_impls()
    except ImportError:
        NUMBA_IMPLS = None

ACTIVE = NUMBA_IMPLS if NUMBA_IMPLS is not None else NUMPY_IMPLS
NUMBA_ENABLED = ACTIVE is not NUMPY_IMPLS

rank_sum = ACTIVE.rank_sum
weighted_rank_sum = ACTIVE.weighted_rank_sum
route_pair = ACTIVE.route_pair
weighted_route_pair = ACTIVE.weighted_route_pair
route_matrix = ACTIVE.route_matrix
weighted_route_matrix = ACTIVE.weighted_route_matrix
