"""Input construction: similarity graphs, synthetic benchmarks, file formats.

File formats (UTF-8, LF):
  edge list   : ``i<TAB>j<TAB>w`` per line, 0-based ids; ``#`` comments;
                two-column lines imply w = 1
  partition   : CSV ``node,community`` (0-based; -1 marks unassigned)
  features    : CSV of floats, one row per node
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functional import Partition, UNASSIGNED
from .graph import Graph, build_graph


# ---------------------------------------------------------------------------
# k-nearest-neighbor similarity graph
# ---------------------------------------------------------------------------

def knn_graph(features: np.ndarray, k: int, chunk_size: int = 1024) -> Graph:
    """Gaussian-kernel graph over the symmetric k-nearest-neighbor relation.

    Nodes i and j are linked iff i is among the k nearest neighbors of j or
    vice versa (ties at the k-th distance are included), with weight
    exp(-d_ij^2 / (3 sigma^2)) where sigma is the mean distance to the k-th
    nearest neighbor over all nodes.  If every point coincides (sigma = 0)
    all weights default to 1.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError("features must be a 2-d array with at least 1 column")
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    n = x.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < {n}, got {k}")

    sq_norms = np.einsum("ij,ij->i", x, x)

    def _dist_sq_block(lo: int, hi: int) -> np.ndarray:
        block = sq_norms[lo:hi, None] + sq_norms[None, :] - 2.0 * (x[lo:hi] @ x.T)
        np.maximum(block, 0.0, out=block)
        return block

    # pass 1: squared distance to the k-th nearest non-self neighbor
    kth_sq = np.empty(n)
    for lo in range(0, n, chunk_size):
        hi = min(lo + chunk_size, n)
        block = _dist_sq_block(lo, hi)
        block[np.arange(lo, hi) - lo, np.arange(lo, hi)] = np.inf
        kth_sq[lo:hi] = np.partition(block, k - 1, axis=1)[:, k - 1]

    sigma = float(np.mean(np.sqrt(kth_sq)))

    # pass 2: collect (i, j, d^2) for every j within i's k-th radius
    rows, cols, dsq = [], [], []
    for lo in range(0, n, chunk_size):
        hi = min(lo + chunk_size, n)
        block = _dist_sq_block(lo, hi)
        block[np.arange(lo, hi) - lo, np.arange(lo, hi)] = np.inf
        r, c = np.nonzero(block <= kth_sq[lo:hi, None])
        rows.append(r + lo)
        cols.append(c)
        dsq.append(block[r, c])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    dsq = np.concatenate(dsq)

    # symmetrize by the OR rule; canonical (min, max) pairs deduplicated
    lo_ = np.minimum(rows, cols)
    hi_ = np.maximum(rows, cols)
    key = lo_ * n + hi_
    _, first = np.unique(key, return_index=True)
    lo_, hi_, dsq = lo_[first], hi_[first], dsq[first]

    if sigma > 0:
        w = np.exp(-dsq / (3.0 * sigma * sigma))
    else:
        w = np.ones_like(dsq)
    return build_graph(zip(lo_.tolist(), hi_.tolist(), w.tolist()), n_nodes=n)


# ---------------------------------------------------------------------------
# planted-partition benchmark
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlantedPartitionSpec:
    n_nodes: int
    n_blocks: int
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 1 or self.n_blocks < 1 or self.n_blocks > self.n_nodes:
            raise ValueError("need 1 <= n_blocks <= n_nodes")
        if not 0.0 <= self.p_out < self.p_in <= 1.0:
            raise ValueError("need 0 <= p_out < p_in <= 1")


def planted_partition(spec: PlantedPartitionSpec) -> tuple[Graph, Partition]:
    """Unit-weight random graph with planted blocks and its ground truth.

    Nodes split into n_blocks contiguous blocks of near-equal size; each
    intra-block pair is an edge with probability p_in, inter-block with
    p_out.  Nodes left isolated are re-wired to one random node of their
    block (or of the whole graph for singleton blocks).
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_nodes
    blocks = np.array_split(np.arange(n), spec.n_blocks)
    truth = np.empty(n, dtype=np.int64)
    for b, members in enumerate(blocks):
        truth[members] = b

    edges: list[tuple[int, int, float]] = []
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(truth[iu] == truth[ju], spec.p_in, spec.p_out)
    mask = rng.random(len(iu)) < prob
    degree = np.zeros(n, dtype=np.int64)
    np.add.at(degree, iu[mask], 1)
    np.add.at(degree, ju[mask], 1)
    edges = list(zip(iu[mask].tolist(), ju[mask].tolist(),
                     np.ones(int(mask.sum())).tolist()))

    for i in np.flatnonzero(degree == 0):
        pool = blocks[truth[i]]
        pool = pool[pool != i]
        if pool.size == 0:
            pool = np.delete(np.arange(n), i)
        if pool.size == 0:
            continue  # single-node graph
        j = int(rng.choice(pool))
        edges.append((min(i, j), max(i, j), 1.0))
        degree[i] += 1
        degree[j] += 1

    return build_graph(edges, n_nodes=n), Partition(truth)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def read_edge_list(path: str, n_nodes: int | None = None) -> Graph:
    """Parse a tab-separated edge list; rejects malformed lines by number."""
    triples: list[tuple[int, int, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(
                    f"{path}:{lineno}: expected 2 or 3 columns, got {len(parts)}")
            try:
                i = int(parts[0])
                j = int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if not np.isfinite(w):
                raise ValueError(f"{path}:{lineno}: non-finite weight {parts[2]}")
            triples.append((i, j, w))
    try:
        return build_graph(triples, n_nodes=n_nodes)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_edge_list(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j, w in zip(g.edge_i.tolist(), g.edge_j.tolist(),
                           g.edge_w.tolist()):
            fh.write(f"{i}\t{j}\t{w!r}\n")


def write_partition(p: Partition, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,community\n")
        for node, lab in enumerate(p.labels.tolist()):
            fh.write(f"{node},{lab}\n")


def read_labels(path: str) -> dict[int, int]:
    """Parse a (possibly partial) node,community CSV into a dict."""
    out: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if lineno == 1 and line.lower() == "node,community":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(
                    f"{path}:{lineno}: expected 'node,community', got {line!r}")
            try:
                node = int(parts[0])
                lab = int(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if node in out:
                raise ValueError(f"{path}:{lineno}: duplicate node {node}")
            out[node] = lab
    return out


def read_partition(path: str, n_nodes: int | None = None) -> Partition:
    """Parse a complete partition; every node 0..N-1 must appear once."""
    mapping = read_labels(path)
    if not mapping and n_nodes in (None, 0):
        return Partition(np.zeros(0, dtype=np.int64))
    n = n_nodes if n_nodes is not None else max(mapping) + 1
    labels = np.full(n, UNASSIGNED, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    for node, lab in mapping.items():
        if not 0 <= node < n:
            raise ValueError(f"{path}: node {node} out of range [0, {n})")
        labels[node] = lab
        seen[node] = True
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise ValueError(f"{path}: node {missing} has no community entry")
    return Partition(labels)


def read_features(path: str) -> np.ndarray:
    """Parse a CSV feature matrix; rejects ragged rows and non-finite values."""
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise ValueError(
                    f"{path}:{lineno}: expected {width} columns, got {len(parts)}")
            try:
                values = [float(p) for p in parts]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if not all(np.isfinite(values)):
                raise ValueError(f"{path}:{lineno}: non-finite feature value")
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no feature rows found")
    return np.asarray(rows, dtype=np.float64)
