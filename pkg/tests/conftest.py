"""Shared fixtures and independent oracles for the test suite.

Oracles here deliberately avoid the library's own code paths: components
via breadth-first search, W via a direct link scan, optima via exhaustive
enumeration, correlations via np.corrcoef.
"""

from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np
import pytest

from swnet.graph import DependencyNetwork, from_links

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).resolve().parents[1] / "data"

COLLAB_EDGES = DATA / "collaboration.tsv"
COLLAB_BLOCKED = (
    "collaboration dataset not present (data/collaboration.tsv); this "
    "sandbox has no network access, so the public download is BLOCKED. "
    "Run scripts/fetch_collaboration.py on a networked machine to enable "
    "this check."
)


def requires_collab():
    return pytest.mark.skipif(not COLLAB_EDGES.exists(), reason=COLLAB_BLOCKED)


@pytest.fixture(scope="session")
def collab_net():
    if not COLLAB_EDGES.exists():
        pytest.skip(COLLAB_BLOCKED)
    from swnet.netio import load_network

    net, _ = load_network(COLLAB_EDGES, directed=False)
    return net


# -- small reference graphs ----------------------------------------------------


@pytest.fixture
def triangle_pendant():
    """Triangle {0,1,2} plus pendant link 2-3."""
    return from_links([(0, 1), (0, 2), (1, 2), (2, 3)], 4, directed=False)


@pytest.fixture
def star10():
    return star_graph(10)


def star_graph(leaves: int) -> DependencyNetwork:
    return from_links([(0, i) for i in range(1, leaves + 1)], leaves + 1,
                      directed=False)


def cycle_graph(n: int) -> DependencyNetwork:
    return from_links([(i, (i + 1) % n) for i in range(n)], n, directed=False)


def two_cliques(k: int = 4) -> DependencyNetwork:
    links = [(i, j) for i in range(k) for j in range(i + 1, k)]
    links += [(k + i, k + j) for i in range(k) for j in range(i + 1, k)]
    return from_links(links, 2 * k, directed=False)


def random_net(n: int, m: int, seed: int, directed: bool = False) -> DependencyNetwork:
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    links = set()
    limit = n * (n - 1) if directed else n * (n - 1) // 2
    m = min(m, limit)
    while len(links) < m:
        a, b = (int(x) for x in rng.integers(n, size=2))
        if a == b:
            continue
        links.add((a, b) if directed else (min(a, b), max(a, b)))
    return from_links(sorted(links), n, directed=directed)


# -- oracles -------------------------------------------------------------------


def bfs_components(n: int, links) -> list[list[int]]:
    adj = [[] for _ in range(n)]
    for a, b in links:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        queue, comp = [start], []
        seen[start] = True
        while queue:
            v = queue.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def w_link_scan(links, degrees, n, S, T) -> float:
    """Direct evaluation of the group criterion from the raw link list."""
    S, T = set(S), set(T)
    s, t = len(S), len(T)
    L = 0
    for a, b in links:
        if a in S and b in T:
            L += 1
        if b in S and a in T:
            L += 1
    K = sum(degrees[v] for v in S)
    mu = 2.0 * s * t / (n * (s + t))
    return mu * (1.0 - mu) * (L / (s * t) - (K - L) / (s * (n - t)))


def exhaustive_best_w(net) -> tuple[float, frozenset, frozenset]:
    """Enumerate every feasible (S, T) pair; intended for n <= 8."""
    und = net.undirected_view()
    links = [(int(a), int(b)) for a, b in und.edges]
    degrees = und.degrees("total")
    n = net.n
    nodes = range(n)
    best = (-np.inf, None, None)
    for s_size in range(2, n + 1):
        for S in itertools.combinations(nodes, s_size):
            for t_size in range(1, n):
                for T in itertools.combinations(nodes, t_size):
                    w = w_link_scan(links, degrees, n, S, T)
                    if w > best[0]:
                        best = (w, frozenset(S), frozenset(T))
    return best


def pearson_oracle(xs, ys) -> float | None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2 or np.all(xs == xs[0]) or np.all(ys == ys[0]):
        return None
    return float(np.corrcoef(xs, ys)[0, 1])


def triangles_brute(net) -> np.ndarray:
    und = net.undirected_view()
    neigh = [set(und.neighbors(i).tolist()) for i in range(net.n)]
    t = np.zeros(net.n, dtype=np.int64)
    for i in range(net.n):
        ns = sorted(neigh[i])
        count = 0
        for a_idx in range(len(ns)):
            for b_idx in range(a_idx + 1, len(ns)):
                if ns[b_idx] in neigh[ns[a_idx]]:
                    count += 1
        t[i] = count
    return t
