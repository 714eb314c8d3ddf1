#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

Times the pairwise rank-routing matrix (the tree grower's hot loop) and the
single-pair rank sum at several problem sizes, asserting that both paths
return identical results. Run directly:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from mvtree.kernels import NUMBA_IMPLS, NUMPY_IMPLS


def _ragged_column(rng, n_rows, h_lo, h_hi):
    lengths = rng.integers(h_lo, h_hi + 1, size=n_rows)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    flat = rng.normal(size=int(lengths.sum()))
    for s, l in zip(starts, lengths):  # row segments sorted, like midpoints
        flat[s:s + l] = np.sort(flat[s:s + l])
    return flat, starts.astype(np.int64), lengths.astype(np.int64)


def bench_route_matrix(impls, flat, starts, lengths, rows, alpha, repeats):
    out = impls.route_matrix(flat, starts, lengths, rows, rows, alpha)  # warm-up/compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impls.route_matrix(flat, starts, lengths, rows, rows, alpha)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_rank_sum(impls, pairs, repeats):
    total = 0.0
    for a, b in pairs[:1]:
        total += impls.rank_sum(a, b)  # warm-up/compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a, b in pairs:
            total += impls.rank_sum(a, b)
        best = min(best, time.perf_counter() - t0)
    return total, best


def main():
    if NUMBA_IMPLS is None:
        print("numba is not available; nothing to compare against.")
        return
    rng = np.random.default_rng(0)
    alpha = 0.05

    print(f"{'kernel':<28}{'size':<18}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for n_rows, h_lo, h_hi in [(60, 8, 16), (120, 16, 32), (200, 24, 48)]:
        flat, starts, lengths = _ragged_column(rng, n_rows, h_lo, h_hi)
        rows = np.arange(n_rows, dtype=np.int64)
        out_np, t_np = bench_route_matrix(NUMPY_IMPLS, flat, starts, lengths, rows, alpha, 3)
        out_nb, t_nb = bench_route_matrix(NUMBA_IMPLS, flat, starts, lengths, rows, alpha, 3)
        assert np.array_equal(out_np, out_nb), "numba and numpy paths disagree"
        size = f"n={n_rows} H={h_lo}..{h_hi}"
        print(f"{'route_matrix':<28}{size:<18}{t_np:>9.3f}s{t_nb:>9.3f}s{t_np / t_nb:>8.1f}x")

    for h in (12, 48):
        pairs = [(rng.normal(size=h), rng.normal(size=h)) for _ in range(2000)]
        s_np, t_np = bench_rank_sum(NUMPY_IMPLS, pairs, 3)
        s_nb, t_nb = bench_rank_sum(NUMBA_IMPLS, pairs, 3)
        size = f"2000 pairs H={h}"
        print(f"{'rank_sum':<28}{size:<18}{t_np:>9.3f}s{t_nb:>9.3f}s{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
