"""Group-level mixing: correlations between group and pattern averages.

After extraction, each group contributes one observation (mean over S,
mean over T) of a node quantity - degree (total, in or out), clustering c
or degree-corrected clustering d.  The group mixing coefficient is the
Pearson correlation of these pairs across groups.  Node quantities are
always measured on the original pre-extraction network; the extraction's
link deletions never feed back into these statistics.

Group profiles attach to every grouped node the mean shape parameter tau
of the groups containing it, for plotting against the node's degree or
clustering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import clustering_c, clustering_d
from .graph import DependencyNetwork, GraphError
from .mixing import edge_end_pearson

GROUP_QUANTITIES = ("total", "in", "out", "c", "d")


def _node_values(net: DependencyNetwork, quantity: str) -> np.ndarray:
    if quantity == "total":
        return net.undirected_view().degrees().astype(np.float64)
    if quantity in ("in", "out"):
        if not net.directed:
            raise GraphError("in/out group means require a directed network")
        return net.degrees(quantity).astype(np.float64)
    if quantity == "c":
        return clustering_c(net)
    if quantity == "d":
        return clustering_d(net)
    raise GraphError(f"quantity must be one of {GROUP_QUANTITIES}, got {quantity!r}")


def group_means(groups, net: DependencyNetwork, quantity: str = "total") -> tuple[np.ndarray, np.ndarray]:
    """Mean node quantity over S and over T for each group (original network)."""
    values = _node_values(net, quantity)
    s_means = np.array([values[list(g.S)].mean() for g in groups])
    t_means = np.array([values[list(g.T)].mean() for g in groups])
    return s_means, t_means


def group_mixing(groups, net: DependencyNetwork, quantity="total") -> float | None:
    """Pearson correlation across groups of (S-mean, T-mean) pairs.

    ``quantity`` is a single kind applied to both sides, or an (alpha,
    beta) pair of degree kinds pairing the S side's alpha-degree with the
    T side's beta-degree.  None when fewer than 2 groups or degenerate.
    """
    if isinstance(quantity, (tuple, list)):
        alpha, beta = quantity
        xs = group_means(groups, net, alpha)[0]
        ys = group_means(groups, net, beta)[1]
    else:
        xs, ys = group_means(groups, net, quantity)
    if len(xs) < 2:
        return None
    return edge_end_pearson(xs, ys)


@dataclass(frozen=True)
class GroupMixingReport:
    n_groups: int
    r_tilde: float | None
    r_in_in: float | None
    r_in_out: float | None
    r_out_in: float | None
    r_out_out: float | None
    r_c: float | None
    r_d: float | None
    k_s: np.ndarray
    k_t: np.ndarray
    c_s: np.ndarray
    c_t: np.ndarray
    d_s: np.ndarray
    d_t: np.ndarray
    tau: np.ndarray

    def rows(self):
        for i in range(self.n_groups):
            yield (float(self.k_s[i]), float(self.k_t[i]), float(self.c_s[i]),
                   float(self.c_t[i]), float(self.d_s[i]), float(self.d_t[i]),
                   float(self.tau[i]))


def group_mixing_report(groups, net: DependencyNetwork) -> GroupMixingReport:
    """All group mixing coefficients plus the per-group mean table."""
    groups = list(groups)
    k_s, k_t = group_means(groups, net, "total") if groups else (np.empty(0), np.empty(0))
    c_s, c_t = group_means(groups, net, "c") if groups else (np.empty(0), np.empty(0))
    d_s, d_t = group_means(groups, net, "d") if groups else (np.empty(0), np.empty(0))
    directed = {}
    for pair in (("in", "in"), ("in", "out"), ("out", "in"), ("out", "out")):
        if net.directed and groups:
            directed[pair] = group_mixing(groups, net, pair)
        else:
            directed[pair] = None
    return GroupMixingReport(
        n_groups=len(groups),
        r_tilde=group_mixing(groups, net, "total") if groups else None,
        r_in_in=directed[("in", "in")],
        r_in_out=directed[("in", "out")],
        r_out_in=directed[("out", "in")],
        r_out_out=directed[("out", "out")],
        r_c=group_mixing(groups, net, "c") if groups else None,
        r_d=group_mixing(groups, net, "d") if groups else None,
        k_s=k_s, k_t=k_t, c_s=c_s, c_t=c_t, d_s=d_s, d_t=d_t,
        tau=np.array([g.tau for g in groups]),
    )


@dataclass(frozen=True)
class NodeGroupProfile:
    """Per grouped node: original-network quantities and mean group tau."""

    node_ids: np.ndarray
    k: np.ndarray
    c: np.ndarray
    d: np.ndarray
    mean_tau: np.ndarray
    group_count: np.ndarray

    def rows(self):
        for i in range(len(self.node_ids)):
            yield (int(self.node_ids[i]), int(self.k[i]), float(self.c[i]),
                   float(self.d[i]), float(self.mean_tau[i]), int(self.group_count[i]))


def group_profiles(groups, net: DependencyNetwork, include_pattern_nodes: bool = False) -> NodeGroupProfile:
    """Mean tau of the groups containing each node; ungrouped nodes omitted.

    Membership means the node sits in a group's S (optionally also T).
    """
    und = net.undirected_view()
    tau_sum = np.zeros(und.n)
    count = np.zeros(und.n, dtype=np.int64)
    for g in groups:
        members = set(g.S) | set(g.T) if include_pattern_nodes else set(g.S)
        idx = list(members)
        tau_sum[idx] += g.tau
        count[idx] += 1
    ids = np.flatnonzero(count > 0)
    return NodeGroupProfile(
        node_ids=ids,
        k=und.degrees()[ids],
        c=clustering_c(und)[ids],
        d=clustering_d(und)[ids],
        mean_tau=tau_sum[ids] / count[ids],
        group_count=count[ids],
    )


def profile_by_bucket(profile: NodeGroupProfile, axis: str = "k", resolution: float = 0.05):
    """Aggregate mean tau per axis bucket: exact k values, or c/d rounded
    down to ``resolution``-wide bins.  Returns (bucket, mean tau, count) rows."""
    if axis == "k":
        xs = profile.k.astype(np.float64)
    elif axis in ("c", "d"):
        raw = profile.c if axis == "c" else profile.d
        xs = np.floor(raw / resolution) * resolution
    else:
        raise GraphError(f"axis must be 'k', 'c' or 'd', got {axis!r}")
    if xs.size == 0:
        return []
    values, inverse = np.unique(xs, return_inverse=True)
    counts = np.bincount(inverse)
    sums = np.bincount(inverse, weights=profile.mean_tau)
    return [(float(v), float(s / cnt), int(cnt)) for v, s, cnt in zip(values, sums, counts)]
