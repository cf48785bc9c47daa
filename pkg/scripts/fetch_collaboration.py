"""Download the network-science coauthorship network (1589 nodes, 2742 links).

This public dataset is not bundled; run this script on a machine with
internet access to place it under data/:

    python3 scripts/fetch_collaboration.py [--dest data]

It tries a list of public mirrors, parses the GML file, drops edge
weights, reduces to a simple undirected graph, and writes

    data/collaboration.tsv        edge list (swnet format)
    data/collaboration_nodes.tsv  node table with author names

The result is validated against the published size (n = 1589, m = 2742)
before anything is written.  Tests that need this dataset skip with an
explanatory message when the files are absent.
"""

from __future__ import annotations

import argparse
import io
import re
import sys
import urllib.request
import zipfile
from pathlib import Path

EXPECTED_N = 1589
EXPECTED_M = 2742

MIRRORS = [
    # (url, member inside zip or None for a raw file)
    ("http://www-personal.umich.edu/~mejn/netdata/netscience.zip", "netscience.gml"),
    ("https://websites.umich.edu/~mejn/netdata/netscience.zip", "netscience.gml"),
    ("https://networks.skewed.de/net/netscience/files/netscience.gml.zip", None),
    ("https://raw.githubusercontent.com/gephi/gephi/master/modules/DesktopImport"
     "/src/main/resources/org/gephi/desktop/importer/samples/netscience.gml", None),
]


def _download(url: str) -> bytes:
    request = urllib.request.Request(url, headers={"User-Agent": "swnet-fetch/1.0"})
    with urllib.request.urlopen(request, timeout=60) as response:
        return response.read()


def _extract_gml(payload: bytes, member: str | None) -> str:
    if payload[:2] == b"PK":
        with zipfile.ZipFile(io.BytesIO(payload)) as archive:
            if member is None:
                member = next(
                    name for name in archive.namelist() if name.endswith(".gml")
                )
            return archive.read(member).decode("utf-8", errors="replace")
    return payload.decode("utf-8", errors="replace")


_NODE_RE = re.compile(r"node\s*\[(.*?)\]", re.S)
_EDGE_RE = re.compile(r"edge\s*\[(.*?)\]", re.S)
_ID_RE = re.compile(r"\bid\s+(\d+)")
_LABEL_RE = re.compile(r'\blabel\s+"((?:[^"\\]|\\.)*)"')
_SOURCE_RE = re.compile(r"\bsource\s+(\d+)")
_TARGET_RE = re.compile(r"\btarget\s+(\d+)")


def parse_gml(text: str) -> tuple[list[str], list[tuple[int, int]]]:
    """Node labels (dense re-indexed) and undirected simple edge list."""
    ids: list[int] = []
    labels: dict[int, str] = {}
    for block in _NODE_RE.finditer(text):
        body = block.group(1)
        m = _ID_RE.search(body)
        if not m:
            continue
        node_id = int(m.group(1))
        ids.append(node_id)
        lab = _LABEL_RE.search(body)
        labels[node_id] = lab.group(1) if lab else str(node_id)
    remap = {node_id: k for k, node_id in enumerate(sorted(ids))}
    edges = set()
    for block in _EDGE_RE.finditer(text):
        body = block.group(1)
        s = _SOURCE_RE.search(body)
        t = _TARGET_RE.search(body)
        if not (s and t):
            continue
        a, b = remap[int(s.group(1))], remap[int(t.group(1))]
        if a == b:
            continue
        edges.add((min(a, b), max(a, b)))
    names = [labels[node_id] for node_id in sorted(ids)]
    return names, sorted(edges)


def write_outputs(dest: Path, names: list[str], edges: list[tuple[int, int]]):
    dest.mkdir(parents=True, exist_ok=True)
    edge_path = dest / "collaboration.tsv"
    with open(edge_path, "w", encoding="utf-8") as handle:
        handle.write(f"# n={len(names)} m={len(edges)} directed=false\n")
        for a, b in edges:
            handle.write(f"{a}\t{b}\n")
    node_path = dest / "collaboration_nodes.tsv"
    with open(node_path, "w", encoding="utf-8") as handle:
        handle.write("id\tname\n")
        for k, name in enumerate(names):
            clean = name.replace("\t", " ").replace("\n", " ")
            handle.write(f"{k}\t{clean}\n")
    return edge_path, node_path


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default="data", help="output directory")
    ap.add_argument("--gml", help="use a local GML file instead of downloading")
    args = ap.parse_args()

    text = None
    if args.gml:
        text = Path(args.gml).read_text(encoding="utf-8", errors="replace")
    else:
        for url, member in MIRRORS:
            try:
                print(f"trying {url} ...", file=sys.stderr)
                text = _extract_gml(_download(url), member)
                break
            except Exception as exc:  # try the next mirror
                print(f"  failed: {exc}", file=sys.stderr)
        if text is None:
            print("all mirrors failed; download netscience.gml manually and "
                  "re-run with --gml PATH", file=sys.stderr)
            return 1

    names, edges = parse_gml(text)
    if len(names) != EXPECTED_N or len(edges) != EXPECTED_M:
        print(
            f"unexpected size: n={len(names)} m={len(edges)} "
            f"(expected n={EXPECTED_N} m={EXPECTED_M}); refusing to write",
            file=sys.stderr,
        )
        return 1
    edge_path, node_path = write_outputs(Path(args.dest), names, edges)
    print(f"wrote {edge_path} and {node_path} (n={len(names)}, m={len(edges)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
