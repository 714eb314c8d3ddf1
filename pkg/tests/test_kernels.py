import os
import subprocess
import sys

import numpy as np
import pytest

from mvtree import kernels


def ragged(rng, n_rows, h_lo=3, h_hi=9, tie_heavy=False):
    """Ragged rows with each segment sorted, as histogram midpoints are."""
    lengths = rng.integers(h_lo, h_hi + 1, size=n_rows).astype(np.int64)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.int64)
    total = int(lengths.sum())
    if tie_heavy:
        flat = rng.integers(0, 5, size=total).astype(np.float64)
    else:
        flat = rng.normal(size=total)
    for s, l in zip(starts, lengths):
        flat[s:s + l] = np.sort(flat[s:s + l])
    return flat, starts, lengths


@pytest.mark.skipif(kernels.NUMBA_IMPLS is None, reason="numba unavailable")
class TestPathAgreement:
    def test_rank_sum(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = rng.integers(0, 8, size=rng.integers(1, 10)).astype(float)
            b = rng.integers(0, 8, size=rng.integers(1, 10)).astype(float)
            assert kernels.NUMBA_IMPLS.rank_sum(a, b) == kernels.NUMPY_IMPLS.rank_sum(a, b)

    def test_weighted_rank_sum(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            na = int(rng.integers(1, 8))
            nb = int(rng.integers(1, 8))
            vals = rng.integers(0, 6, size=na + nb).astype(float)
            w = rng.uniform(0.1, 2.0, size=na + nb)
            got_nb = kernels.NUMBA_IMPLS.weighted_rank_sum(vals, w, na)
            got_np = kernels.NUMPY_IMPLS.weighted_rank_sum(vals, w, na)
            assert got_nb == got_np

    def test_route_matrix(self):
        rng = np.random.default_rng(2)
        for tie_heavy in (False, True):
            flat, starts, lengths = ragged(rng, 30, tie_heavy=tie_heavy)
            rows = np.arange(30, dtype=np.int64)
            a = kernels.NUMBA_IMPLS.route_matrix(flat, starts, lengths, rows, rows, 0.2)
            b = kernels.NUMPY_IMPLS.route_matrix(flat, starts, lengths, rows, rows, 0.2)
            assert np.array_equal(a, b)

    def test_weighted_route_matrix(self):
        rng = np.random.default_rng(3)
        flat, starts, lengths = ragged(rng, 20)
        wflat = rng.uniform(0.1, 2.0, size=flat.shape[0])
        rows = np.arange(20, dtype=np.int64)
        a = kernels.NUMBA_IMPLS.weighted_route_matrix(flat, wflat, starts, lengths, rows, rows, 0.2)
        b = kernels.NUMPY_IMPLS.weighted_route_matrix(flat, wflat, starts, lengths, rows, rows, 0.2)
        assert np.array_equal(a, b)


class TestKernelSemantics:
    def test_weighted_with_unit_weights_matches_unweighted(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            na = int(rng.integers(1, 8))
            nb = int(rng.integers(1, 8))
            vals = rng.integers(0, 6, size=na + nb).astype(float)
            plain = kernels.rank_sum(vals[:na].copy(), vals[na:].copy())
            weighted = kernels.weighted_rank_sum(vals, np.ones(na + nb), na)
            assert weighted == plain

    def test_route_matrix_diagonal_is_center(self):
        rng = np.random.default_rng(5)
        flat, starts, lengths = ragged(rng, 15)
        rows = np.arange(15, dtype=np.int64)
        codes = kernels.route_matrix(flat, starts, lengths, rows, rows, 0.4)
        assert np.all(np.diag(codes) == kernels.CENTER_CODE)

    def test_route_matrix_matches_route_pair(self):
        rng = np.random.default_rng(6)
        flat, starts, lengths = ragged(rng, 12)
        rows = np.arange(12, dtype=np.int64)
        codes = kernels.route_matrix(flat, starts, lengths, rows, rows, 0.3)
        for i in range(12):
            ref = flat[starts[i]:starts[i] + lengths[i]]
            for j in range(12):
                obj = flat[starts[j]:starts[j] + lengths[j]]
                assert codes[i, j] == kernels.route_pair(ref, obj, 0.3)


class TestEnvFlag:
    def test_disable_numba_selects_numpy_path(self):
        env = dict(os.environ, MVTREE_NUMBA="0")
        out = subprocess.run(
            [sys.executable, "-c",
             "from mvtree import kernels; print(kernels.NUMBA_ENABLED, kernels.ACTIVE.name)"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "False numpy"

    def test_default_reports_active_path(self):
        # whichever path is active, the module aliases must point at it
        assert kernels.rank_sum is kernels.ACTIVE.rank_sum
        assert kernels.route_matrix is kernels.ACTIVE.route_matrix
