"""Benchmark the compiled kernels against the pure-numpy fallback.

Runs the group-search kernel and the triangle counter on seeded random
graphs in both execution modes, checks that results agree bit for bit,
and prints a timing table.

    python3 benchmarks/bench_kernels.py [--n 1600] [--m 2800] [--repeat 5]

The numpy path is selected per call here; outside the benchmark it is
chosen globally by import availability or ``SWNET_NUMBA=0``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from swnet import accel
from swnet.graph import build_csr, from_links
from swnet.groups import ExtractionConfig, sample_gnm_edges, tabu_search_best_group


def _graph(n: int, m: int, seed: int):
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    edges = sample_gnm_edges(n, m, rng)
    return from_links([tuple(e) for e in edges], n, directed=False)


def _time(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_tabu(n: int, m: int, repeat: int, seed: int = 1):
    net = _graph(n, m, seed)
    und = net.undirected_view()
    indptr, indices = und.adjacency()
    deg = und.degrees("total")
    rng = np.random.default_rng(0)
    s0 = np.flatnonzero(rng.random(n) < 0.05)[:max(2, n // 50)]
    t0 = np.flatnonzero(rng.random(n) < 0.05)[:max(1, n // 50)]
    if s0.size < 2 or t0.size < 1:
        s0, t0 = np.array([0, 1]), np.array([2])
    restrict = n > 64

    def run(use_numba):
        return accel.tabu_run(indptr, indices, deg, s0, t0,
                              tenure=7, max_idle=2 * n, restrict=restrict,
                              use_numba=use_numba)

    if accel.NUMBA_ENABLED:
        run(True)  # compile before timing
    rows = []
    results = {}
    for label, flag in (("numba", True), ("numpy", False)):
        if flag and not accel.NUMBA_ENABLED:
            rows.append((label, None))
            continue
        elapsed, out = _time(lambda f=flag: run(f), repeat)
        rows.append((label, elapsed))
        results[label] = out
    if len(results) == 2:
        a, b = results["numba"], results["numpy"]
        assert (a[0] == b[0]).all() and (a[1] == b[1]).all(), "membership mismatch"
        assert a[2] == b[2] and a[3] == b[3], "score or step-count mismatch"
    return rows


def bench_triangles(n: int, m: int, repeat: int, seed: int = 2):
    net = _graph(n, m, seed)
    und = net.undirected_view()
    indptr, indices = und.adjacency()

    def run(use_numba):
        return accel.triangle_counts(indptr, indices, use_numba=use_numba)

    if accel.NUMBA_ENABLED:
        run(True)
    rows = []
    results = {}
    for label, flag in (("numba", True), ("numpy", False)):
        if flag and not accel.NUMBA_ENABLED:
            rows.append((label, None))
            continue
        elapsed, out = _time(lambda f=flag: run(f), repeat)
        rows.append((label, elapsed))
        results[label] = out
    if len(results) == 2:
        assert (results["numba"] == results["numpy"]).all(), "triangle mismatch"
    return rows


def bench_search(n: int, m: int, seed: int = 3):
    """One full multi-restart search per mode (end-to-end comparison)."""
    net = _graph(n, m, seed)
    rows = []
    for label, flag in (("numba", True), ("numpy", False)):
        if flag and not accel.NUMBA_ENABLED:
            rows.append((label, None, None))
            continue
        config = ExtractionConfig(restarts=10, seed=9, use_numba=flag)
        t0 = time.perf_counter()
        group = tabu_search_best_group(net, config)
        rows.append((label, time.perf_counter() - t0, group.W))
    ws = [w for _, _, w in rows if w is not None]
    if len(ws) == 2:
        assert ws[0] == ws[1], "search results differ between modes"
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1600)
    ap.add_argument("--m", type=int, default=2800)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"graph: n={args.n} m={args.m}  numba available: {accel.NUMBA_ENABLED}")
    print()
    print("kernel           mode    best time")
    for label, elapsed in bench_tabu(args.n, args.m, args.repeat):
        shown = "unavailable" if elapsed is None else f"{elapsed * 1e3:9.2f} ms"
        print(f"tabu run         {label:6s}  {shown}")
    for label, elapsed in bench_triangles(args.n, args.m, args.repeat):
        shown = "unavailable" if elapsed is None else f"{elapsed * 1e3:9.2f} ms"
        print(f"triangle counts  {label:6s}  {shown}")
    for label, elapsed, w in bench_search(args.n, args.m):
        shown = "unavailable" if elapsed is None else f"{elapsed:9.2f} s "
        extra = "" if w is None else f"  (W = {w:.6f})"
        print(f"10-restart search {label:6s} {shown}{extra}")
    print()
    print("results verified identical across modes where both ran")


if __name__ == "__main__":
    main()
