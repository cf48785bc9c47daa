"""Reading and writing networks as plain text.

Two formats are used throughout:

* **Edge list**: one link per line, ``source<TAB>target``.  Cells are node
  names (arbitrary strings without tabs).  Lines starting with ``#`` and
  blank lines are skipped.  A lone line without a tab is split on
  whitespace as a fallback.

* **Node table**: TSV with header ``id<TAB>name[<TAB>key ...]``.  The ``id``
  column must hold each of ``0 .. n-1`` exactly once (any row order);
  remaining columns are free-form node attributes.  Empty cells mean "no
  value".

When both files are given, the node table fixes the id assignment and edge
endpoints are matched by name; names seen only in the edge list are
appended as new nodes and reported.  Names seen only in the table become
isolated nodes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import DependencyNetwork, GraphError, SimplificationReport, reduce_to_simple


@dataclass
class LoadReport:
    simplification: SimplificationReport
    unknown_names: list[str] = field(default_factory=list)
    isolated_nodes: int = 0


def _open_text(path_or_buf, mode="r"):
    if isinstance(path_or_buf, (str, Path)):
        return open(path_or_buf, mode, encoding="utf-8")
    return path_or_buf


def _iter_rows(handle):
    for lineno, raw in enumerate(handle, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def read_edge_rows(path_or_buf) -> list[tuple[str, str]]:
    """Parse an edge-list file into (source name, target name) pairs."""
    rows = []
    handle = _open_text(path_or_buf)
    try:
        for lineno, line in _iter_rows(handle):
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise GraphError(f"line {lineno}: expected 'source<TAB>target', got {line!r}")
            rows.append((parts[0].strip(), parts[1].strip()))
    finally:
        if isinstance(path_or_buf, (str, Path)):
            handle.close()
    return rows


def read_node_table(path_or_buf) -> tuple[list[str], list[dict], list[str]]:
    """Parse a node table; returns (names, attribute dicts, attribute keys).

    The returned lists are id-ordered (position = node id).
    """
    handle = _open_text(path_or_buf)
    try:
        lines = list(_iter_rows(handle))
    finally:
        if isinstance(path_or_buf, (str, Path)):
            handle.close()
    if not lines:
        raise GraphError("node table is empty")
    header = lines[0][1].split("\t")
    if len(header) < 2 or header[0] != "id" or header[1] != "name":
        raise GraphError("node table header must start with 'id<TAB>name'")
    keys = [h.strip() for h in header[2:]]
    entries: dict[int, tuple[str, dict]] = {}
    for lineno, line in lines[1:]:
        parts = line.split("\t")
        if len(parts) < 2:
            raise GraphError(f"line {lineno}: node row needs at least id and name")
        try:
            idx = int(parts[0])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: node id {parts[0]!r} is not an integer") from exc
        if idx in entries:
            raise GraphError(f"line {lineno}: duplicate node id {idx}")
        attrs = {k: v.strip() for k, v in zip(keys, parts[2:]) if v.strip()}
        entries[idx] = (parts[1].strip(), attrs)
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise GraphError("node ids must be exactly 0 .. n-1")
    names = [entries[i][0] for i in range(n)]
    attrs = [entries[i][1] for i in range(n)]
    return names, attrs, keys


def load_network(
    edge_path,
    directed: bool = False,
    nodes_path=None,
) -> tuple[DependencyNetwork, LoadReport]:
    """Load a network from an edge list, optionally joined with a node table."""
    rows = read_edge_rows(edge_path)
    if nodes_path is not None:
        names, attrs, _ = read_node_table(nodes_path)
        name_to_id = {name: i for i, name in enumerate(names)}
        if len(name_to_id) != len(names):
            raise GraphError("node table names are not unique")
    else:
        names, attrs = [], []
        name_to_id = {}
    unknown: list[str] = []
    edges = np.empty((len(rows), 2), dtype=np.int64)
    for k, (a, b) in enumerate(rows):
        for pos, name in ((0, a), (1, b)):
            idx = name_to_id.get(name)
            if idx is None:
                idx = len(name_to_id)
                name_to_id[name] = idx
                names.append(name)
                attrs.append({})
                if nodes_path is not None:
                    unknown.append(name)
            edges[k, pos] = idx
    n = len(names)
    clean, simp = reduce_to_simple(edges, n, directed)
    net = DependencyNetwork(n, clean, directed, names=names, node_attributes=attrs, _validated=True)
    linked = np.zeros(n, dtype=bool)
    if net.m:
        linked[net.edges.ravel()] = True
    report = LoadReport(simp, unknown, int((~linked).sum()))
    return net, report


def save_edge_list(net: DependencyNetwork, path_or_buf) -> None:
    handle = _open_text(path_or_buf, "w")
    try:
        handle.write(f"# n={net.n} m={net.m} directed={str(net.directed).lower()}\n")
        for a, b in net.edges:
            handle.write(f"{net.name(int(a))}\t{net.name(int(b))}\n")
    finally:
        if isinstance(path_or_buf, (str, Path)):
            handle.close()


def save_node_table(net: DependencyNetwork, path_or_buf, keys=None) -> None:
    keys = list(keys) if keys is not None else net.attribute_keys
    handle = _open_text(path_or_buf, "w")
    try:
        handle.write("\t".join(["id", "name", *keys]) + "\n")
        for i in range(net.n):
            attrs = net.attributes(i)
            cells = [str(i), net.name(i), *(str(attrs.get(k, "")) for k in keys)]
            handle.write("\t".join(cells) + "\n")
    finally:
        if isinstance(path_or_buf, (str, Path)):
            handle.close()


def dumps_edge_list(net: DependencyNetwork) -> str:
    buf = io.StringIO()
    save_edge_list(net, buf)
    return buf.getvalue()
