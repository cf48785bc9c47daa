"""Standard and degree-corrected clustering.

For a node i with degree k_i and t_i links among its neighbors:

* c_i = t_i / C(k_i, 2), the usual clustering coefficient (0 for k_i <= 1);
* d_i = t_i / omega_i, where omega_i = floor((1/2) sum_{j in G(i)}
  min(k_j - 1, k_i - 1)) caps the neighbor-link count by what the
  neighbors' own degrees allow.  d_i = 0 when k_i <= 1 or omega_i = 0.

Since any link between two neighbors of i consumes an endpoint slot at
both of them, t_i never exceeds omega_i and d_i stays in [0, 1]; d_i >=
c_i because omega_i <= C(k_i, 2).  Degrees, triangles and the random-graph
baseline p = <k> / (n - 1) all live on the undirected simple view.

Clustering mixing (r_c, r_d) reuses the link-end Pearson convention of the
degree coefficients with c or d as the node value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import accel
from .graph import DependencyNetwork, GraphError
from .mixing import edge_end_pearson, link_end_values


def triangle_counts(net: DependencyNetwork) -> np.ndarray:
    """t_i: links among the neighbors of each node (undirected view)."""
    und = net.undirected_view()
    indptr, indices = und.adjacency()
    return accel.triangle_counts(indptr, indices)


def omega_counts(net: DependencyNetwork) -> np.ndarray:
    """Degree-capped maximum neighbor-link count per node."""
    und = net.undirected_view()
    k = und.degrees().astype(np.int64)
    e = und.edges
    if not len(e):
        return np.zeros(und.n, dtype=np.int64)
    per_link = np.minimum(k[e[:, 0]] - 1, k[e[:, 1]] - 1)
    sums = np.bincount(
        np.concatenate([e[:, 0], e[:, 1]]),
        weights=np.concatenate([per_link, per_link]),
        minlength=und.n,
    ).astype(np.int64)
    return sums // 2


def clustering_c(net: DependencyNetwork) -> np.ndarray:
    und = net.undirected_view()
    k = und.degrees().astype(np.float64)
    t = triangle_counts(und).astype(np.float64)
    pairs = k * (k - 1.0) / 2.0
    out = np.zeros(und.n, dtype=np.float64)
    mask = k > 1
    out[mask] = t[mask] / pairs[mask]
    return out


def clustering_d(net: DependencyNetwork) -> np.ndarray:
    und = net.undirected_view()
    k = und.degrees()
    t = triangle_counts(und).astype(np.float64)
    omega = omega_counts(und)
    out = np.zeros(und.n, dtype=np.float64)
    mask = (k > 1) & (omega > 0)
    out[mask] = t[mask] / omega[mask]
    return out


def p_baseline(net: DependencyNetwork) -> float:
    """Expected clustering of a random graph with the same mean degree."""
    und = net.undirected_view()
    if und.n <= 1:
        return 0.0
    return (2.0 * und.m / und.n) / (und.n - 1)


def clustering_mixing(net: DependencyNetwork, which: str = "c") -> float | None:
    """Link-end Pearson correlation of c or d values; None if degenerate."""
    values = _values(net, which)
    und = net.undirected_view()
    xs, ys = link_end_values(und, values, values, both_orientations=True)
    return edge_end_pearson(xs, ys)


def _values(net: DependencyNetwork, which: str) -> np.ndarray:
    if which == "c":
        return clustering_c(net)
    if which == "d":
        return clustering_d(net)
    raise GraphError(f"clustering kind must be 'c' or 'd', got {which!r}")


@dataclass(frozen=True)
class ClusteringReport:
    c: np.ndarray
    d: np.ndarray
    mean_c: float
    mean_d: float
    p_baseline: float
    share_d_eq_1: float
    share_d_lt_p: float
    r_c: float | None
    r_d: float | None


def clustering_report(net: DependencyNetwork) -> ClusteringReport:
    und = net.undirected_view()
    c = clustering_c(und)
    d = clustering_d(und)
    p = p_baseline(und)
    n = max(und.n, 1)
    return ClusteringReport(
        c=c,
        d=d,
        mean_c=float(c.mean()) if und.n else 0.0,
        mean_d=float(d.mean()) if und.n else 0.0,
        p_baseline=p,
        share_d_eq_1=float((d == 1.0).sum()) / n,
        share_d_lt_p=float((d < p).sum()) / n,
        r_c=edge_end_pearson(*link_end_values(und, c, c, True)) if und.m else None,
        r_d=edge_end_pearson(*link_end_values(und, d, d, True)) if und.m else None,
    )


@dataclass(frozen=True)
class ValueProfile:
    """Rows of (x value, mean paired value, observation count)."""

    x_kind: str
    y_kind: str
    xs: np.ndarray
    means: np.ndarray
    counts: np.ndarray

    def rows(self):
        for x, mean, count in zip(self.xs, self.means, self.counts):
            yield float(x), float(mean), int(count)


def _bucket_profile(xs: np.ndarray, ys: np.ndarray, x_kind: str, y_kind: str) -> ValueProfile:
    if xs.size == 0:
        return ValueProfile(x_kind, y_kind, np.empty(0), np.empty(0), np.empty(0, dtype=np.int64))
    values, inverse = np.unique(xs, return_inverse=True)
    counts = np.bincount(inverse)
    sums = np.bincount(inverse, weights=ys)
    return ValueProfile(x_kind, y_kind, values, sums / counts, counts)


def neighbor_clustering_profile(net: DependencyNetwork, which: str = "d") -> ValueProfile:
    """Mean neighbor clustering as a function of node clustering (link ends)."""
    und = net.undirected_view()
    values = _values(und, which)
    xs, ys = link_end_values(und, values, values, both_orientations=True)
    return _bucket_profile(xs, ys, which, f"neighbor_{which}")


def degree_clustering_profile(
    net: DependencyNetwork, which: str = "c", degree_kind: str = "total"
) -> ValueProfile:
    """Mean clustering per degree value, one observation per node.

    The clustering value always comes from the undirected view; the x-axis
    degree may be in/out on directed networks.
    """
    und = net.undirected_view()
    values = _values(und, which)
    deg = net.degrees(degree_kind) if degree_kind != "total" else und.degrees()
    return _bucket_profile(deg.astype(np.float64), values, f"k_{degree_kind}", which)
