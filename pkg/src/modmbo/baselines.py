"""Comparison methods: spectral clustering and modularity-matrix bipartition.

Both operate on the same Graph type as the main scheme.  The modularity
matrix B = W - gamma k k^T / 2m is never densified; its action on a vector
is assembled from a sparse matvec and a rank-one correction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from collections import deque

import numpy as np
from sklearn.cluster import KMeans

from .eigen import smallest_eigenpairs
from .functional import Partition, modularity
from .graph import Graph, laplacian

_KERNEL_TOL = 1e-8


@dataclass(frozen=True)
class SpectralEmbedding:
    """Rows y_i of the k nontrivial smallest-eigenvector matrix U."""

    matrix: np.ndarray  # N x k, orthonormal columns

    @property
    def n_vectors(self) -> int:
        return self.matrix.shape[1]


def spectral_embedding(g: Graph, k: int, seed: int = 0) -> SpectralEmbedding:
    """First k nontrivial Laplacian eigenvectors as point coordinates.

    The numerical kernel block is rotated so the exact constant vector is
    isolated and dropped; any remaining kernel vectors (one per extra
    connected component) lead the embedding.  For k = N all N eigenvectors
    are used unmodified.
    """
    n = g.n_nodes
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    lap = laplacian(g)
    if k == n:
        basis = smallest_eigenpairs(lap, n, tol=_KERNEL_TOL, seed=seed)
        return SpectralEmbedding(np.asarray(basis.vectors))

    basis = smallest_eigenpairs(lap, k + 1, tol=_KERNEL_TOL, seed=seed)
    vec = np.array(basis.vectors)
    d = int(np.sum(basis.eigenvalues <= _KERNEL_TOL))
    if d > 1:
        warnings.warn(
            f"graph appears disconnected ({d} near-zero eigenvalues); "
            f"spectral clustering is best suited to connected graphs",
            stacklevel=2)
    d = max(d, 1)
    const = np.full(n, 1.0 / np.sqrt(n))
    coefs = vec[:, :d].T @ const
    norm = np.linalg.norm(coefs)
    if norm > 0.5:  # constant vector lives in the kernel block, as expected
        rot, _ = np.linalg.qr(np.column_stack([coefs / norm, np.eye(d)]))
        vec[:, :d] = vec[:, :d] @ rot
    return SpectralEmbedding(vec[:, 1:k + 1])


def spectral_clustering(g: Graph, k: int, seed: int = 0) -> Partition:
    """k-means on the spectral embedding (k-means++, 20 restarts, seeded)."""
    emb = spectral_embedding(g, k, seed=seed)
    km = KMeans(n_clusters=k, init="k-means++", n_init=20, random_state=seed)
    labels = km.fit_predict(emb.matrix)
    return Partition(labels.astype(np.int64)).compacted()


class ModularityOperator:
    """Implicit modularity matrix of a node group, with zero row sums.

    For a group S the operator is B_ij - delta_ij * sum_{l in S} B_il with
    B = W - gamma k k^T / 2m; its action never materializes the dense matrix.
    """

    def __init__(self, g: Graph, nodes: np.ndarray, gamma: float):
        self.nodes = np.asarray(nodes, dtype=np.int64)
        self._w = g.adjacency[self.nodes][:, self.nodes]
        self._k = g.strengths[self.nodes]
        self._two_m = g.total_weight_2m
        self._gamma = gamma
        vol = float(self._k.sum())
        self._diag = (np.asarray(self._w.sum(axis=1)).ravel()
                      - gamma * self._k * vol / self._two_m)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def matvec(self, z: np.ndarray) -> np.ndarray:
        return (self._w @ z
                - self._gamma * self._k * (self._k @ z) / self._two_m
                - self._diag * z)

    def shift_bound(self) -> float:
        """An upper bound on the spectral radius (Gershgorin-style)."""
        row_abs = (np.asarray(self._w.sum(axis=1)).ravel()
                   + self._gamma * self._k * float(self._k.sum()) / self._two_m)
        return float(np.max(row_abs + np.abs(self._diag), initial=0.0))

    def toarray(self) -> np.ndarray:
        dense = (self._w.toarray()
                 - self._gamma * np.outer(self._k, self._k) / self._two_m)
        dense[np.diag_indices_from(dense)] -= self._diag
        return dense


def _leading_eigenpair(op: ModularityOperator, rng: np.random.Generator,
                       tol: float = 1e-7, max_iter: int = 5000,
                       ) -> tuple[float, np.ndarray] | None:
    """Power iteration on the shifted operator; None if it fails to settle."""
    n = op.size
    if n == 1:
        return None
    sigma = op.shift_bound() + 1.0
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        bv = op.matvec(v)
        beta = float(v @ bv)
        if np.linalg.norm(bv - beta * v) <= tol * max(1.0, abs(beta)):
            return beta, v
        w = bv + sigma * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return None
        v = w / norm
    return None


def newman_recursive_bipartition(g: Graph, gamma: float, seed: int = 0) -> Partition:
    """Recursive sign-split on the leading modularity eigenvector.

    Each group is split by the sign pattern of the leading eigenvector of
    its modularity operator; the split is kept only if global modularity
    strictly increases.  Groups whose leading eigenvalue is nonpositive, or
    whose eigenvector does not converge, are left whole.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if g.total_weight_2m <= 0:
        raise ValueError("modularity bipartition needs a graph with 2m > 0")

    rng = np.random.default_rng(seed)
    labels = np.zeros(g.n_nodes, dtype=np.int64)
    labels[g.strengths <= 0] = -1
    q_current = modularity(g, Partition(labels), gamma)
    next_label = 1

    queue = deque([np.flatnonzero(labels == 0)])
    while queue:
        group = queue.popleft()
        if len(group) < 2:
            continue
        op = ModularityOperator(g, group, gamma)
        pair = _leading_eigenpair(op, rng)
        if pair is None:
            continue
        beta, v = pair
        if beta <= 0:
            continue
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        plus = v > 0
        if plus.all() or not plus.any():
            continue
        candidate = labels.copy()
        candidate[group[plus]] = next_label
        q_new = modularity(g, Partition(candidate), gamma)
        if q_new > q_current:
            labels = candidate
            q_current = q_new
            next_label += 1
            queue.append(group[plus])
            queue.append(group[~plus])

    return Partition(labels).compacted()
