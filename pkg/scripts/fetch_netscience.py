#!/usr/bin/env python3
"""Fetch the network-science coauthorship graph and write data/netscience.tsv.

Downloads the public GML file, extracts the largest connected component
(379 nodes, 914 weighted edges), remaps node ids to 0..378, and writes the
tab-separated edge list the acceptance suite looks for.

Usage: python scripts/fetch_netscience.py [--url URL] [--out PATH]
"""

import argparse
import io
import os
import re
import sys
import urllib.request
import zipfile
from collections import deque

DEFAULT_URL = "https://websites.umich.edu/~mejn/netdata/netscience.zip"


def parse_gml_edges(text):
    """Extract (source, target, value) triples from a GML edge list."""
    edges = []
    for block in re.findall(r"edge\s*\[(.*?)\]", text, flags=re.S):
        src = re.search(r"source\s+(\d+)", block)
        dst = re.search(r"target\s+(\d+)", block)
        val = re.search(r"value\s+([0-9.eE+-]+)", block)
        if src is None or dst is None:
            raise ValueError(f"malformed GML edge block: {block[:80]!r}")
        w = float(val.group(1)) if val else 1.0
        edges.append((int(src.group(1)), int(dst.group(1)), w))
    return edges


def largest_component(edges):
    adjacency = {}
    for i, j, _ in edges:
        adjacency.setdefault(i, set()).add(j)
        adjacency.setdefault(j, set()).add(i)
    seen = set()
    best = set()
    for start in adjacency:
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nbr in adjacency[node]:
                if nbr not in comp:
                    comp.add(nbr)
                    queue.append(nbr)
        seen |= comp
        if len(comp) > len(best):
            best = comp
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default=DEFAULT_URL)
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "data", "netscience.tsv"))
    args = parser.parse_args()

    print(f"downloading {args.url} ...")
    blob = urllib.request.urlopen(args.url, timeout=60).read()
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        gml_name = next(n for n in zf.namelist() if n.endswith(".gml"))
        text = zf.read(gml_name).decode("utf-8", errors="replace")

    edges = parse_gml_edges(text)
    component = largest_component(edges)
    kept = [(i, j, w) for i, j, w in edges if i in component and j in component]
    remap = {old: new for new, old in enumerate(sorted(component))}

    n_nodes, n_edges = len(component), len(kept)
    print(f"largest component: {n_nodes} nodes, {n_edges} edges")
    if (n_nodes, n_edges) != (379, 914):
        print("warning: expected 379 nodes / 914 edges; the source file may "
              "have changed", file=sys.stderr)

    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for i, j, w in sorted((min(remap[i], remap[j]),
                               max(remap[i], remap[j]), w)
                              for i, j, w in kept):
            fh.write(f"{i}\t{j}\t{w!r}\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
