"""Sparse weighted undirected graph with strengths, volumes, cuts, and Laplacian.

The graph stores a canonical upper-triangle edge list (i <= j) plus a
materialized symmetric CSR adjacency for fast matvecs.  Both are immutable
after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class Graph:
    """Immutable weighted undirected graph.

    Attributes
    ----------
    n_nodes : int
        Number of nodes; node ids are 0..n_nodes-1.
    edge_i, edge_j, edge_w : np.ndarray
        Canonical edge arrays with edge_i <= edge_j, sorted lexicographically.
        Self-loops (i == j) are permitted.
    strengths : np.ndarray
        Per-node weighted degree k_i = sum_j w_ij (a self-loop counts once).
    total_weight_2m : float
        Total volume 2m = sum_i k_i.
    """

    __slots__ = ("n_nodes", "edge_i", "edge_j", "edge_w",
                 "strengths", "total_weight_2m", "_adj")

    def __init__(self, n_nodes: int, edge_i: np.ndarray, edge_j: np.ndarray,
                 edge_w: np.ndarray):
        self.n_nodes = int(n_nodes)
        self.edge_i = edge_i
        self.edge_j = edge_j
        self.edge_w = edge_w
        for a in (edge_i, edge_j, edge_w):
            a.setflags(write=False)

        # symmetric adjacency: mirror off-diagonal entries, keep diagonal once
        off = edge_i != edge_j
        rows = np.concatenate([edge_i, edge_j[off]])
        cols = np.concatenate([edge_j, edge_i[off]])
        vals = np.concatenate([edge_w, edge_w[off]])
        adj = sp.csr_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        adj.sum_duplicates()
        self._adj = adj

        self.strengths = np.asarray(adj.sum(axis=1)).ravel()
        self.strengths.setflags(write=False)
        self.total_weight_2m = float(self.strengths.sum())

    @property
    def adjacency(self) -> sp.csr_matrix:
        """Full symmetric adjacency matrix (CSR)."""
        return self._adj

    @property
    def n_edges(self) -> int:
        """Number of stored canonical edges (undirected, incl. self-loops)."""
        return len(self.edge_w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n_nodes == other.n_nodes
                and np.array_equal(self.edge_i, other.edge_i)
                and np.array_equal(self.edge_j, other.edge_j)
                and np.array_equal(self.edge_w, other.edge_w))

    def __hash__(self):
        return hash((self.n_nodes, self.edge_w.tobytes(),
                     self.edge_i.tobytes(), self.edge_j.tobytes()))

    def __repr__(self):
        return (f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges}, "
                f"total_weight_2m={self.total_weight_2m:g})")


def build_graph(edge_triples: Iterable[tuple[int, int, float]],
                n_nodes: int | None = None) -> Graph:
    """Build a Graph from (i, j, weight) triples.

    Edges given in one direction are mirrored.  Duplicate entries for the
    same node pair are accepted only if their weights agree exactly;
    conflicting duplicates are rejected.  Weights must be finite and >= 0;
    zero-weight edges are dropped.

    Parameters
    ----------
    edge_triples : iterable of (int, int, float)
    n_nodes : int, optional
        Number of nodes; defaults to max node id + 1.  Required for graphs
        with trailing isolated nodes or an empty edge list.
    """
    triples = list(edge_triples)
    if triples:
        ii = np.asarray([t[0] for t in triples], dtype=np.int64)
        jj = np.asarray([t[1] for t in triples], dtype=np.int64)
        ww = np.asarray([t[2] for t in triples], dtype=np.float64)
    else:
        ii = np.empty(0, dtype=np.int64)
        jj = np.empty(0, dtype=np.int64)
        ww = np.empty(0, dtype=np.float64)

    if n_nodes is None:
        if len(ii) == 0:
            raise ValueError("n_nodes is required for an empty edge list")
        n_nodes = int(max(ii.max(), jj.max())) + 1
    n_nodes = int(n_nodes)
    if n_nodes < 0:
        raise ValueError(f"n_nodes must be >= 0, got {n_nodes}")

    if len(ii):
        if not np.all(np.isfinite(ww)):
            bad = int(np.flatnonzero(~np.isfinite(ww))[0])
            raise ValueError(f"non-finite weight on edge ({ii[bad]}, {jj[bad]})")
        if np.any(ww < 0):
            bad = int(np.flatnonzero(ww < 0)[0])
            raise ValueError(
                f"negative weight {ww[bad]} on edge ({ii[bad]}, {jj[bad]})")
        if ii.min() < 0 or jj.min() < 0 or ii.max() >= n_nodes or jj.max() >= n_nodes:
            raise ValueError(f"node index out of range [0, {n_nodes})")

    # canonicalize to i <= j and detect conflicting duplicates
    lo = np.minimum(ii, jj)
    hi = np.maximum(ii, jj)
    order = np.lexsort((hi, lo))
    lo, hi, ww = lo[order], hi[order], ww[order]
    if len(lo):
        same = np.flatnonzero((np.diff(lo) == 0) & (np.diff(hi) == 0))
        if np.any(ww[same] != ww[same + 1]):
            k = same[np.flatnonzero(ww[same] != ww[same + 1])[0]]
            raise ValueError(
                f"conflicting duplicate edge ({lo[k]}, {hi[k]}): "
                f"weights {ww[k]} and {ww[k + 1]}")
        keep = np.ones(len(lo), dtype=bool)
        keep[same + 1] = False
        lo, hi, ww = lo[keep], hi[keep], ww[keep]
        nz = ww > 0
        lo, hi, ww = lo[nz], hi[nz], ww[nz]

    return Graph(n_nodes, lo, hi, ww)


def volume(g: Graph, node_set: Sequence[int] | np.ndarray) -> float:
    """vol(A) = sum of strengths over the node set."""
    idx = np.asarray(list(node_set) if isinstance(node_set, (set, frozenset))
                     else node_set, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n_nodes):
        raise ValueError("node index out of range")
    return float(g.strengths[idx].sum())


def cut(g: Graph, node_set: Sequence[int] | np.ndarray) -> float:
    """Cut(A, A^c) = total weight of edges with exactly one endpoint in A."""
    idx = np.asarray(list(node_set) if isinstance(node_set, (set, frozenset))
                     else node_set, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n_nodes):
        raise ValueError("node index out of range")
    mask = np.zeros(g.n_nodes, dtype=bool)
    mask[idx] = True
    crossing = mask[g.edge_i] != mask[g.edge_j]
    return float(g.edge_w[crossing].sum())


def induced_subgraph(g: Graph, nodes: Sequence[int] | np.ndarray) -> tuple[Graph, np.ndarray]:
    """Subgraph induced on `nodes` (edges with both endpoints inside).

    Returns (subgraph, node_array) where node_array[new_id] = original id;
    new ids follow ascending original order.  Subgraph strengths are
    recomputed from the induced edges.
    """
    idx = np.unique(np.asarray(list(nodes) if isinstance(nodes, (set, frozenset))
                               else nodes, dtype=np.int64))
    if idx.size == 0:
        raise ValueError("node set is empty")
    if idx.min() < 0 or idx.max() >= g.n_nodes:
        raise ValueError("node index out of range")
    new_id = np.full(g.n_nodes, -1, dtype=np.int64)
    new_id[idx] = np.arange(idx.size)
    inside = (new_id[g.edge_i] >= 0) & (new_id[g.edge_j] >= 0)
    sub = Graph(idx.size,
                new_id[g.edge_i[inside]],
                new_id[g.edge_j[inside]],
                g.edge_w[inside].copy())
    return sub, idx


class Laplacian:
    """Combinatorial graph Laplacian L = D - W in sparse symmetric form.

    Satisfies <z, Lz> = (1/2) sum_ij w_ij (z_i - z_j)^2.
    """

    __slots__ = ("matrix", "graph")

    def __init__(self, matrix: sp.csr_matrix, graph: Graph):
        self.matrix = matrix
        self.graph = graph

    @property
    def n(self) -> int:
        return self.graph.n_nodes

    def matvec(self, z: np.ndarray) -> np.ndarray:
        return self.matrix @ z

    def quadratic_form(self, z: np.ndarray) -> float:
        return float(z @ (self.matrix @ z))

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def laplacian(g: Graph) -> Laplacian:
    """L = D - W with D = diag(strengths)."""
    d = sp.diags(g.strengths, format="csr")
    mat = (d - g.adjacency).tocsr()
    return Laplacian(mat, g)
