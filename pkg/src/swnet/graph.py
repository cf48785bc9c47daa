"""Core network data model.

Networks are stored as dense integer node ids ``0 .. n - 1`` plus an edge
array of shape ``(m, 2)``.  Directed networks keep links as ``(source,
target)`` rows; undirected networks keep each link once with ``source <
target``.  All analysis assumes simple graphs (no self-links, no duplicate
links); use :func:`reduce_to_simple` to canonicalize raw edge lists before
constructing a network.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class GraphError(ValueError):
    """Raised for malformed graph data (bad ids, non-simple edges, ...)."""


@dataclass(frozen=True)
class NodeRecord:
    """A node with its dense id, display name and free-form attributes."""

    index: int
    name: str
    attributes: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SimplificationReport:
    self_links_removed: int
    duplicate_links_removed: int


@dataclass(frozen=True)
class DegreeSummary:
    n: int
    m: int
    directed: bool
    mean_degree: float
    max_degree: int
    min_degree: int
    density: float
    max_in_degree: int | None = None
    max_out_degree: int | None = None


def _as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError(f"edge array must have shape (m, 2), got {arr.shape}")
    return arr


def reduce_to_simple(edges, n: int, directed: bool) -> tuple[np.ndarray, SimplificationReport]:
    """Drop self-links and duplicate links from a raw edge list.

    For undirected graphs a pair of mutual links counts as a duplicate.
    Returns the canonical edge array (lexicographically sorted, and with
    ``source < target`` in the undirected case) plus a report of what was
    removed.
    """
    arr = _as_edge_array(edges)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError(f"edge endpoint out of range for n={n}")
    loops = arr[:, 0] == arr[:, 1]
    n_loops = int(loops.sum())
    arr = arr[~loops]
    if not directed and arr.size:
        arr = np.sort(arr, axis=1)
    if arr.size:
        arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
        keep = np.ones(len(arr), dtype=bool)
        keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
        n_dup = int((~keep).sum())
        arr = arr[keep]
    else:
        n_dup = 0
    return arr, SimplificationReport(n_loops, n_dup)


class DependencyNetwork:
    """A simple directed or undirected network over dense node ids.

    Node names and attributes are optional; analysis code only needs the
    edge structure, names matter for I/O and reporting.
    """

    def __init__(
        self,
        n: int,
        edges,
        directed: bool,
        names: Sequence[str] | None = None,
        node_attributes: Sequence[Mapping[str, str]] | None = None,
        _validated: bool = False,
    ):
        if n < 0:
            raise GraphError("node count must be non-negative")
        arr = _as_edge_array(edges)
        if not _validated:
            clean, report = reduce_to_simple(arr, n, directed)
            if report.self_links_removed or report.duplicate_links_removed:
                raise GraphError(
                    "edge list is not simple; call reduce_to_simple first "
                    f"({report.self_links_removed} self-links, "
                    f"{report.duplicate_links_removed} duplicates)"
                )
            arr = clean
        self.n = int(n)
        self.edges = arr
        self.directed = bool(directed)
        if names is not None and len(names) != n:
            raise GraphError("names length must match node count")
        self._names = list(names) if names is not None else None
        if node_attributes is not None and len(node_attributes) != n:
            raise GraphError("attribute list length must match node count")
        self._attributes = list(node_attributes) if node_attributes is not None else None
        self._cache: dict = {}

    # -- basic properties ------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def name(self, i: int) -> str:
        return self._names[i] if self._names is not None else str(i)

    @property
    def names(self) -> list[str]:
        return [self.name(i) for i in range(self.n)]

    def attributes(self, i: int) -> Mapping[str, str]:
        return self._attributes[i] if self._attributes is not None else {}

    def node(self, i: int) -> NodeRecord:
        return NodeRecord(i, self.name(i), dict(self.attributes(i)))

    @property
    def attribute_keys(self) -> list[str]:
        keys: list[str] = []
        if self._attributes is not None:
            for attrs in self._attributes:
                for k in attrs:
                    if k not in keys:
                        keys.append(k)
        return keys

    # -- degrees and adjacency -------------------------------------------

    def out_degrees(self) -> np.ndarray:
        if "out_deg" not in self._cache:
            self._cache["out_deg"] = np.bincount(self.edges[:, 0], minlength=self.n)
        return self._cache["out_deg"]

    def in_degrees(self) -> np.ndarray:
        if "in_deg" not in self._cache:
            self._cache["in_deg"] = np.bincount(self.edges[:, 1], minlength=self.n)
        return self._cache["in_deg"]

    def degrees(self, kind: str = "total") -> np.ndarray:
        """Node degrees; ``kind`` is 'in', 'out' or 'total'.

        For undirected networks only 'total' is defined.  For directed
        networks 'total' counts both link directions (in + out).
        """
        if self.directed:
            if kind == "in":
                return self.in_degrees()
            if kind == "out":
                return self.out_degrees()
            if kind == "total":
                return self.in_degrees() + self.out_degrees()
            raise GraphError(f"unknown degree kind {kind!r}")
        if kind != "total":
            raise GraphError(f"degree kind {kind!r} undefined for undirected network")
        if "deg" not in self._cache:
            self._cache["deg"] = np.bincount(self.edges.ravel(), minlength=self.n)
        return self._cache["deg"]

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency (indptr, sorted indices).

        Directed networks give out-neighbors; undirected networks give all
        neighbors (each link appears in both rows).
        """
        if "csr" not in self._cache:
            if self.directed:
                src, dst = self.edges[:, 0], self.edges[:, 1]
            else:
                src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
                dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            self._cache["csr"] = build_csr(self.n, src, dst)
        return self._cache["csr"]

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self.adjacency()
        return indices[indptr[i]: indptr[i + 1]]

    # -- views -------------------------------------------------------------

    def undirected_view(self) -> "DependencyNetwork":
        """The undirected simple network over the same nodes.

        Mutual directed links collapse into one undirected link.
        """
        if not self.directed:
            return self
        if "und" not in self._cache:
            edges, _ = reduce_to_simple(self.edges, self.n, directed=False)
            self._cache["und"] = DependencyNetwork(
                self.n, edges, directed=False, names=self._names,
                node_attributes=self._attributes, _validated=True,
            )
        return self._cache["und"]

    def subgraph(self, keep: np.ndarray) -> "DependencyNetwork":
        """Induced subgraph on ``keep`` (old ids, ascending); ids are
        relabelled densely preserving order."""
        keep = np.asarray(sorted(set(int(v) for v in keep)), dtype=np.int64)
        remap = -np.ones(self.n, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        if self.m:
            mask = (remap[self.edges[:, 0]] >= 0) & (remap[self.edges[:, 1]] >= 0)
            edges = remap[self.edges[mask]]
        else:
            edges = self.edges
        names = [self.name(i) for i in keep] if self._names is not None else None
        attrs = [self._attributes[i] for i in keep] if self._attributes is not None else None
        return DependencyNetwork(len(keep), edges, self.directed, names, attrs, _validated=True)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"DependencyNetwork(n={self.n}, m={self.m}, {kind})"


def build_csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays (indptr int64, indices int64 sorted within rows)."""
    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order], dtype=np.int64)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def largest_component(net: DependencyNetwork) -> tuple[DependencyNetwork, np.ndarray]:
    """Largest weakly connected component as a relabelled network.

    Returns ``(subnetwork, kept)`` where ``kept`` holds the original node
    ids (ascending) of the surviving nodes.  Size ties go to the component
    containing the smallest node id.
    """
    if net.n == 0:
        return net, np.empty(0, dtype=np.int64)
    mat = csr_matrix(
        (np.ones(net.m, dtype=np.int8), (net.edges[:, 0], net.edges[:, 1])),
        shape=(net.n, net.n),
    )
    n_comp, labels = connected_components(mat, directed=net.directed, connection="weak")
    sizes = np.bincount(labels, minlength=n_comp)
    best = sizes.max()
    # first label attaining max size is the one containing the smallest node id
    winner = int(np.flatnonzero(sizes == best)[0])
    kept = np.flatnonzero(labels == winner).astype(np.int64)
    return net.subgraph(kept), kept


def degree_summary(net: DependencyNetwork) -> DegreeSummary:
    """Basic size and degree statistics of a network."""
    deg = net.degrees("total")
    # every link contributes two degree ends, directed or not
    mean = 2.0 * net.m / net.n if net.n else 0.0
    density = mean / (net.n - 1) if net.n > 1 else 0.0
    return DegreeSummary(
        n=net.n,
        m=net.m,
        directed=net.directed,
        mean_degree=mean,
        max_degree=int(deg.max()) if net.n else 0,
        min_degree=int(deg.min()) if net.n else 0,
        density=density,
        max_in_degree=int(net.in_degrees().max()) if net.directed and net.n else None,
        max_out_degree=int(net.out_degrees().max()) if net.directed and net.n else None,
    )


def from_links(
    links: Iterable[tuple[int, int]],
    n: int | None = None,
    directed: bool = False,
    names: Sequence[str] | None = None,
) -> DependencyNetwork:
    """Convenience constructor: simplify and build in one step."""
    arr = _as_edge_array(list(links))
    if n is None:
        n = int(arr.max()) + 1 if arr.size else 0
    clean, _ = reduce_to_simple(arr, n, directed)
    return DependencyNetwork(n, clean, directed, names=names, _validated=True)
