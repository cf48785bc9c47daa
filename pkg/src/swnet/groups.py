"""Sequential extraction of statistically significant node groups.

A *group* is a pair (S, T): S is a set of nodes that share a linking
pattern, T the set they link to.  The criterion

    W(S, T) = mu (1 - mu) (L(S,T) / (s t) - L(S,T^C) / (s (n - t)))

with ``mu = 2 s t / (n (s + t))`` rewards pairs whose S->T link density
beats the S->complement density, damped for very small or very large
groups.  ``L(S, T)`` counts ordered endpoint incidences: an undirected
link {i, j} contributes once when i is in S and j in T, and once more when
j is in S and i in T (so S = T on a clique reaches density 1).

Extraction maximizes W with restarted tabu search, accepts the group if W
exceeds the best-W distribution quantile of Erdos-Renyi G(n, m) graphs of
matching size, removes the links between S and T, drops any node that
thereby becomes isolated, and repeats on the residual network until the
best group is no longer significant.

The group shape is summarized by ``tau = |S and T| / |S or T|`` and a
categorical kind: community (S = T), module (disjoint), hub & spokes
(module with a single-node T), core/periphery (strict containment) or
mixture.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import accel
from .graph import DependencyNetwork, GraphError, build_csr

KIND_COMMUNITY = "community"
KIND_MODULE = "module"
KIND_HUB_SPOKES = "hub_spokes"
KIND_CORE_PERIPHERY = "core_periphery"
KIND_MIXTURE = "mixture"
GROUP_KINDS = (KIND_COMMUNITY, KIND_MODULE, KIND_HUB_SPOKES, KIND_CORE_PERIPHERY, KIND_MIXTURE)

DEFAULT_SEED = 20120

# above this many nodes, add-moves only consider nodes adjacent to the
# opposite set; small instances keep the exhaustive move scan
FULL_MOVE_SCAN_LIMIT = 64


@dataclass(frozen=True)
class ExtractionConfig:
    restarts: int = 30
    tenure: int = 7
    max_idle: int | None = None  # None: 2 * n of the current network
    samples: int = 100
    level: float = 0.01
    seed: int = DEFAULT_SEED
    threads: int = 1
    full_move_scan_limit: int = FULL_MOVE_SCAN_LIMIT
    use_numba: bool | None = None  # None: module-level selection

    def __post_init__(self):
        if self.restarts < 1 or self.tenure < 1 or self.samples < 1:
            raise ValueError("restarts, tenure and samples must be positive")
        if not (0.0 < self.level < 0.5):
            raise ValueError("significance level must lie in (0, 0.5)")
        if self.max_idle is not None and self.max_idle < 1:
            raise ValueError("max_idle must be positive")

    def idle_limit(self, n: int) -> int:
        return self.max_idle if self.max_idle is not None else 2 * n


@dataclass(frozen=True)
class NodeGroup:
    order: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    W: float
    tau: float
    kind: str

    @property
    def s(self) -> int:
        return len(self.S)

    @property
    def t(self) -> int:
        return len(self.T)


@dataclass(frozen=True)
class SignificanceModel:
    n: int
    m: int
    level: float
    values: np.ndarray
    threshold: float


@dataclass(frozen=True)
class RoundInfo:
    order: int
    n: int
    m: int
    threshold: float
    best_w: float
    accepted: bool
    links_removed: int
    nodes_dropped: int


@dataclass
class ExtractionResult:
    groups: list[NodeGroup]
    rounds: list[RoundInfo]
    n: int
    m: int
    background_nodes: np.ndarray
    background_links: int
    stop_reason: str
    elapsed_seconds: float
    config: ExtractionConfig

    @property
    def background_node_fraction(self) -> float:
        return len(self.background_nodes) / self.n if self.n else 0.0

    @property
    def background_link_fraction(self) -> float:
        return self.background_links / self.m if self.m else 0.0


def mu(s: int, t: int, n: int) -> float:
    """Size factor 2st / (n (s + t)), in [0, 1]."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if s < 0 or t < 0 or s + t == 0:
        raise ValueError("group sizes must be non-negative and not both zero")
    return 2.0 * s * t / (n * (s + t))


def criterion_w(net: DependencyNetwork, S, T) -> float:
    """Criterion W of a candidate pair on the undirected view of ``net``."""
    und = net.undirected_view()
    s_ids = np.asarray(sorted(set(int(v) for v in S)), dtype=np.int64)
    t_ids = np.asarray(sorted(set(int(v) for v in T)), dtype=np.int64)
    n = und.n
    if s_ids.size == 0 or t_ids.size == 0:
        raise ValueError("S and T must be nonempty")
    if t_ids.size >= n:
        raise ValueError("T must be a proper subset of the nodes")
    if s_ids.min() < 0 or s_ids.max() >= n or t_ids.min() < 0 or t_ids.max() >= n:
        raise GraphError("node id out of range")
    in_t = np.zeros(n, dtype=bool)
    in_t[t_ids] = True
    deg = und.degrees()
    L = 0
    for v in s_ids:
        L += int(in_t[und.neighbors(int(v))].sum())
    K = int(deg[s_ids].sum())
    return accel.w_value(n, s_ids.size, t_ids.size, L, K)


def classify_group(S, T) -> tuple[float, str]:
    """Group shape parameter tau and categorical kind for a pair (S, T)."""
    s_set = set(int(v) for v in S)
    t_set = set(int(v) for v in T)
    if not s_set or not t_set:
        raise ValueError("S and T must be nonempty")
    tau = len(s_set & t_set) / len(s_set | t_set)
    if not (s_set & t_set):
        kind = KIND_HUB_SPOKES if len(t_set) == 1 else KIND_MODULE
    elif s_set == t_set:
        kind = KIND_COMMUNITY
    elif s_set < t_set or t_set < s_set:
        kind = KIND_CORE_PERIPHERY
    else:
        kind = KIND_MIXTURE
    return tau, kind


# -- random graph model -------------------------------------------------------

def sample_gnm_edges(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform simple undirected G(n, m): canonical (m, 2) edge array."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError(f"m={m} exceeds the {total} possible links")
    if m == 0:
        return np.empty((0, 2), dtype=np.int64)
    if m * 3 >= total:
        codes = rng.choice(total, size=m, replace=False)
    else:
        chosen: set[int] = set()
        while len(chosen) < m:
            batch = rng.integers(0, total, size=2 * (m - len(chosen)) + 8)
            for c in batch:
                if len(chosen) >= m:
                    break
                chosen.add(int(c))
        codes = np.fromiter(chosen, dtype=np.int64, count=m)
    codes = np.sort(np.asarray(codes, dtype=np.int64))
    # row offsets of the upper triangle: pair (i, j), i < j, has code
    # offsets[i] + (j - i - 1)
    i_idx = np.arange(n, dtype=np.int64)
    offsets = i_idx * n - i_idx * (i_idx + 1) // 2
    rows = np.searchsorted(offsets, codes, side="right") - 1
    cols = codes - offsets[rows] + rows + 1
    return np.column_stack([rows, cols])


# -- search drivers -----------------------------------------------------------

def _as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _draw_initial(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    hi = max(3, math.isqrt(n - 1) + 1 if n > 1 else 3)  # ceil(sqrt(n)) floor 3
    s_size = min(int(rng.integers(2, hi + 1)), n)
    t_size = max(1, min(int(rng.integers(2, hi + 1)), n - 1))
    s0 = rng.choice(n, size=s_size, replace=False)
    t0 = rng.choice(n, size=t_size, replace=False)
    return s0.astype(np.int64), t0.astype(np.int64)


def _search_csr(indptr, indices, deg, n, config: ExtractionConfig, seed):
    """Best (in_S, in_T, W) over config.restarts runs; deterministic in seed."""
    ss = _as_seed_sequence(seed)
    children = ss.spawn(config.restarts)
    restrict = n > config.full_move_scan_limit
    idle = config.idle_limit(n)
    inits = []
    for child in children:
        rng = np.random.default_rng(child)
        inits.append(_draw_initial(rng, n))

    def run(pair):
        s0, t0 = pair
        return accel.tabu_run(
            indptr, indices, deg, s0, t0,
            tenure=config.tenure, max_idle=idle, restrict=restrict,
            use_numba=config.use_numba,
        )

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            outs = list(pool.map(run, inits))
    else:
        outs = [run(pair) for pair in inits]
    best = None
    for out in outs:  # ties keep the earliest restart
        if best is None or out[2] > best[2]:
            best = out
    return best


def tabu_search_best_group(net: DependencyNetwork, config: ExtractionConfig, seed=None) -> NodeGroup:
    """Best group candidate on the undirected view of ``net``.

    Runs ``config.restarts`` independent tabu searches from random initial
    pairs and keeps the best W (ties go to the earliest restart).
    """
    und = net.undirected_view()
    if und.n < 2:
        raise GraphError("network too small for group search")
    indptr, indices = und.adjacency()
    deg = und.degrees().astype(np.int64)
    ss = _as_seed_sequence(config.seed if seed is None else seed)
    in_s, in_t, w, _ = _search_csr(indptr, indices, deg, und.n, config, ss)
    S = tuple(int(v) for v in np.flatnonzero(in_s))
    T = tuple(int(v) for v in np.flatnonzero(in_t))
    tau, kind = classify_group(S, T)
    return NodeGroup(order=0, S=S, T=T, W=float(w), tau=tau, kind=kind)


def significance_threshold(n: int, m: int, config: ExtractionConfig, seed=None) -> SignificanceModel:
    """Best-W distribution over G(n, m) samples, searched identically.

    The threshold is the (1 - level) linear-interpolation quantile of the
    sampled best-W values.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if m < 0 or m > n * (n - 1) // 2:
        raise ValueError("m out of range")
    ss = _as_seed_sequence(config.seed if seed is None else seed)
    children = ss.spawn(config.samples)

    def one(child):
        graph_ss, search_ss = child.spawn(2)
        rng = np.random.default_rng(graph_ss)
        edges = sample_gnm_edges(n, m, rng)
        if edges.size:
            src = np.concatenate([edges[:, 0], edges[:, 1]])
            dst = np.concatenate([edges[:, 1], edges[:, 0]])
        else:
            src = dst = np.empty(0, dtype=np.int64)
        indptr, indices = build_csr(n, src, dst)
        deg = indptr[1:] - indptr[:-1]
        _, _, w, _ = _search_csr(indptr, indices, deg, n, config, search_ss)
        return float(w)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            values = np.array(list(pool.map(one, children)))
    else:
        values = np.array([one(child) for child in children])
    threshold = float(np.quantile(values, 1.0 - config.level))
    return SignificanceModel(n=n, m=m, level=config.level, values=values, threshold=threshold)


def extract_all(net: DependencyNetwork, config: ExtractionConfig | None = None) -> ExtractionResult:
    """Extract significant groups sequentially from the undirected view.

    Each accepted group has the links between its S and T removed; nodes
    isolated by the removal leave the residual network (nodes that started
    out isolated stay, they are part of the network's n).  Stops when the
    best remaining group is not significant against G(n, m) of the residual
    size, or when no links remain.
    """
    if config is None:
        config = ExtractionConfig()
    started = time.perf_counter()
    und = net.undirected_view()
    n0, m0 = und.n, und.m
    active = np.ones(n0, dtype=bool)
    edges = und.edges.copy()
    master = _as_seed_sequence(config.seed)
    groups: list[NodeGroup] = []
    rounds: list[RoundInfo] = []
    grouped = np.zeros(n0, dtype=bool)
    stop_reason = "exhausted"

    while True:
        ids = np.flatnonzero(active)
        n_r = int(ids.size)
        m_r = int(len(edges))
        if m_r == 0:
            stop_reason = "no_links_left"
            break
        if n_r < 2:
            stop_reason = "too_small"
            break
        round_ss = master.spawn(1)[0]
        search_ss, sig_ss = round_ss.spawn(2)

        remap = -np.ones(n0, dtype=np.int64)
        remap[ids] = np.arange(n_r)
        local = remap[edges]
        src = np.concatenate([local[:, 0], local[:, 1]])
        dst = np.concatenate([local[:, 1], local[:, 0]])
        indptr, indices = build_csr(n_r, src, dst)
        deg = indptr[1:] - indptr[:-1]

        in_s, in_t, w, _ = _search_csr(indptr, indices, deg, n_r, config, search_ss)
        model = significance_threshold(n_r, m_r, config, sig_ss)

        order = len(groups) + 1
        if w <= model.threshold:
            rounds.append(RoundInfo(order, n_r, m_r, model.threshold, float(w), False, 0, 0))
            stop_reason = "insignificant"
            break

        S = ids[in_s.astype(bool)]
        T = ids[in_t.astype(bool)]
        tau, kind = classify_group(S, T)
        groups.append(NodeGroup(
            order=order,
            S=tuple(int(v) for v in S),
            T=tuple(int(v) for v in T),
            W=float(w),
            tau=tau,
            kind=kind,
        ))
        grouped[S] = True
        grouped[T] = True

        in_s_mask = np.zeros(n0, dtype=bool)
        in_t_mask = np.zeros(n0, dtype=bool)
        in_s_mask[S] = True
        in_t_mask[T] = True
        hit = (in_s_mask[edges[:, 0]] & in_t_mask[edges[:, 1]]) | \
              (in_t_mask[edges[:, 0]] & in_s_mask[edges[:, 1]])
        removed = int(hit.sum())
        before = np.zeros(n0, dtype=np.int64)
        if len(edges):
            before += np.bincount(edges.ravel(), minlength=n0)
        edges = edges[~hit]
        after = np.zeros(n0, dtype=np.int64)
        if len(edges):
            after += np.bincount(edges.ravel(), minlength=n0)
        newly_isolated = active & (before > 0) & (after == 0)
        active &= ~newly_isolated
        rounds.append(RoundInfo(order, n_r, m_r, model.threshold, float(w), True,
                                removed, int(newly_isolated.sum())))
        if removed == 0:
            stop_reason = "stalled"
            break

    return ExtractionResult(
        groups=groups,
        rounds=rounds,
        n=n0,
        m=m0,
        background_nodes=np.flatnonzero(~grouped),
        background_links=int(len(edges)),
        stop_reason=stop_reason,
        elapsed_seconds=time.perf_counter() - started,
        config=config,
    )


# -- summaries ----------------------------------------------------------------

@dataclass(frozen=True)
class KindRow:
    kind: str
    count: int
    mean_s: float
    mean_t: float
    mean_tau: float
    link_share: float
    node_share: float


@dataclass(frozen=True)
class GroupSummary:
    n_groups: int
    mean_s: float
    mean_t: float
    mean_tau: float
    rows: tuple[KindRow, ...]
    grouped_node_fraction: float
    explained_link_fraction: float
    background_node_fraction: float
    background_link_fraction: float


def group_summary(groups, net: DependencyNetwork, include_pattern_nodes: bool = False) -> GroupSummary:
    """Per-kind counts, sizes and link/node shares for extracted groups.

    Link attribution replays the sequential removal: each group owns the
    links between its S and T still present when it was extracted.  Node
    shares count nodes appearing in S (optionally also T); overlapping
    groups make kind shares non-additive.
    """
    und = net.undirected_view()
    n, m = und.n, und.m
    edges = und.edges.copy()
    per_group_links = []
    for g in groups:
        in_s = np.zeros(n, dtype=bool)
        in_t = np.zeros(n, dtype=bool)
        in_s[list(g.S)] = True
        in_t[list(g.T)] = True
        if len(edges):
            hit = (in_s[edges[:, 0]] & in_t[edges[:, 1]]) | \
                  (in_t[edges[:, 0]] & in_s[edges[:, 1]])
        else:
            hit = np.zeros(0, dtype=bool)
        per_group_links.append(int(hit.sum()))
        edges = edges[~hit]

    def nodes_of(g: NodeGroup) -> set[int]:
        return set(g.S) | set(g.T) if include_pattern_nodes else set(g.S)

    rows = []
    for kind in GROUP_KINDS:
        sel = [
            (g, links) for g, links in zip(groups, per_group_links) if g.kind == kind
        ]
        if not sel:
            continue
        members: set[int] = set()
        for g, _ in sel:
            members |= nodes_of(g)
        rows.append(KindRow(
            kind=kind,
            count=len(sel),
            mean_s=float(np.mean([g.s for g, _ in sel])),
            mean_t=float(np.mean([g.t for g, _ in sel])),
            mean_tau=float(np.mean([g.tau for g, _ in sel])),
            link_share=sum(links for _, links in sel) / m if m else 0.0,
            node_share=len(members) / n if n else 0.0,
        ))
    all_members: set[int] = set()
    for g in groups:
        all_members |= nodes_of(g)
    n_groups = len(groups)
    return GroupSummary(
        n_groups=n_groups,
        mean_s=float(np.mean([g.s for g in groups])) if n_groups else 0.0,
        mean_t=float(np.mean([g.t for g in groups])) if n_groups else 0.0,
        mean_tau=float(np.mean([g.tau for g in groups])) if n_groups else 0.0,
        rows=tuple(rows),
        grouped_node_fraction=len(all_members) / n if n else 0.0,
        explained_link_fraction=sum(per_group_links) / m if m else 0.0,
        background_node_fraction=1.0 - (len(all_members) / n if n else 0.0),
        background_link_fraction=1.0 - (sum(per_group_links) / m if m else 0.0),
    )


def default_threads() -> int:
    """Thread count from SWNET_THREADS, defaulting to 1."""
    raw = os.environ.get("SWNET_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)
