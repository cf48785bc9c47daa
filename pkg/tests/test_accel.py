"""Equivalence of the compiled kernels and the pure-numpy fallback.

The two implementations share the same floating-point expression
structure and a canonical tie-break order, so results must agree exactly
(bit for bit), not just approximately.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from swnet import accel
from swnet.groups import sample_gnm_edges

from conftest import random_net, triangles_brute, w_link_scan

needs_numba = pytest.mark.skipif(not accel.NUMBA_ENABLED, reason="numba unavailable")


def test_w_value_matches_link_scan():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(4, 30))
        net = random_net(n, int(rng.integers(n, 3 * n)), seed=int(rng.integers(1e6)))
        und = net.undirected_view()
        links = [(int(a), int(b)) for a, b in und.edges]
        degrees = und.degrees("total")
        s = int(rng.integers(2, n))
        t = int(rng.integers(1, n))
        S = rng.choice(n, size=s, replace=False)
        T = rng.choice(n, size=t, replace=False)
        L = 0
        for a, b in links:
            L += (a in set(S.tolist())) and (b in set(T.tolist()))
            L += (b in set(S.tolist())) and (a in set(T.tolist()))
        K = int(degrees[S].sum())
        got = accel.w_value(n, s, t, L, K)
        want = w_link_scan(links, degrees, n, S.tolist(), T.tolist())
        assert got == pytest.approx(want, abs=1e-12)


def _run_both(net, seed):
    und = net.undirected_view()
    indptr, indices = und.adjacency()
    deg = und.degrees("total")
    n = net.n
    rng = np.random.default_rng(seed)
    s0 = rng.choice(n, size=min(3, n - 1), replace=False)
    t0 = rng.choice(n, size=min(2, n - 1), replace=False)
    out = {}
    for restrict in (False, True):
        for use_numba in (False, True) if accel.NUMBA_ENABLED else (False,):
            out[(restrict, use_numba)] = accel.tabu_run(
                indptr, indices, deg, s0, t0,
                tenure=7, max_idle=2 * n, restrict=restrict,
                use_numba=use_numba,
            )
    return out


@needs_numba
def test_tabu_paths_bit_identical():
    rng = np.random.default_rng(11)
    for trial in range(25):
        n = int(rng.integers(6, 40))
        m = int(rng.integers(n, 4 * n))
        net = random_net(n, m, seed=trial)
        res = _run_both(net, seed=trial)
        for restrict in (False, True):
            a = res[(restrict, True)]
            b = res[(restrict, False)]
            assert (a[0] == b[0]).all(), f"S mask differs (trial {trial})"
            assert (a[1] == b[1]).all(), f"T mask differs (trial {trial})"
            assert a[2] == b[2], f"W differs (trial {trial})"
            assert a[3] == b[3], f"move count differs (trial {trial})"


def test_triangles_both_paths_match_brute_force():
    for seed in range(8):
        net = random_net(15, 40, seed=seed)
        und = net.undirected_view()
        indptr, indices = und.adjacency()
        want = triangles_brute(net)
        got_np = accel.triangle_counts(indptr, indices, use_numba=False)
        assert (got_np == want).all()
        if accel.NUMBA_ENABLED:
            got_nb = accel.triangle_counts(indptr, indices, use_numba=True)
            assert (got_nb == want).all()


def test_numba_request_without_numba():
    if accel.NUMBA_ENABLED:
        pytest.skip("numba present")
    net = random_net(8, 12, seed=0)
    und = net.undirected_view()
    indptr, indices = und.adjacency()
    with pytest.raises(RuntimeError):
        accel.tabu_run(indptr, indices, und.degrees("total"),
                       np.array([0, 1]), np.array([2]),
                       tenure=7, max_idle=4, restrict=False, use_numba=True)


def test_env_flag_disables_numba():
    code = "import swnet.accel as a; print(a.NUMBA_ENABLED)"
    env = dict(os.environ, SWNET_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "False"


def test_gnm_sampler_simple_and_exact():
    rng = np.random.default_rng(5)
    for n, m in [(6, 10), (10, 45), (40, 40), (100, 380)]:
        edges = sample_gnm_edges(n, m, rng)
        assert edges.shape == (m, 2)
        pairs = {(min(a, b), max(a, b)) for a, b in edges.tolist()}
        assert len(pairs) == m
        assert all(a != b for a, b in edges.tolist())
        assert edges.min() >= 0 and edges.max() < n


def test_gnm_sampler_uniform_smoke():
    # K3 has 3 possible links; sampling 2 leaves one out uniformly
    rng = np.random.default_rng(17)
    misses = {0: 0, 1: 0, 2: 0}
    all_pairs = [(0, 1), (0, 2), (1, 2)]
    for _ in range(1200):
        edges = {(min(a, b), max(a, b)) for a, b in
                 sample_gnm_edges(3, 2, rng).tolist()}
        (gone,) = set(all_pairs) - edges
        misses[all_pairs.index(gone)] += 1
    for count in misses.values():
        assert 300 < count < 500  # 400 expected, ~6 sigma margin
