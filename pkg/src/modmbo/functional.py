"""Quality and energy functions: modularity, graph TV, balance term, energies.

The central identity (verified exhaustively in the tests): for an
indicator-valued partition function f of a partition g,

    Q(g) = 1 - gamma - H(f) / 2m,   H(f) = |f|_TV - gamma * ||f - mean(f)||^2

with the strength-weighted l2 norm and mean.  The subgraph energy
`energy_h_subgraph` rescales the balance term so that minimizing it on a
community S maximizes the *global* modularity gain of splitting S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

UNASSIGNED = -1


@dataclass(frozen=True)
class Partition:
    """Per-node community labels; UNASSIGNED (-1) marks isolated nodes."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be a 1-d array")
        if labels.size and labels.min() < UNASSIGNED:
            raise ValueError("labels must be >= -1")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_communities(self) -> int:
        assigned = self.labels[self.labels >= 0]
        return int(len(np.unique(assigned)))

    def compacted(self) -> "Partition":
        """Relabel nonempty communities to 0..N_c-1 by first appearance."""
        labels = self.labels.copy()
        assigned = labels >= 0
        if assigned.any():
            values, first_idx, inverse = np.unique(
                labels[assigned], return_index=True, return_inverse=True)
            rank = np.empty(len(values), dtype=np.int64)
            rank[np.argsort(first_idx, kind="stable")] = np.arange(len(values))
            labels[assigned] = rank[inverse]
        return Partition(labels)

    def communities(self) -> list[np.ndarray]:
        """Node arrays per community id (compact ids assumed)."""
        out = []
        for lab in np.unique(self.labels[self.labels >= 0]):
            out.append(np.flatnonzero(self.labels == lab))
        return out

    def same_as(self, other: "Partition") -> bool:
        """Equality as set partitions (label names ignored)."""
        return np.array_equal(self.compacted().labels, other.compacted().labels)


# ---------------------------------------------------------------------------
# partition functions f: G -> R^n_hat (indicator-valued rows live in V^n_hat)
# ---------------------------------------------------------------------------

def indicator_from_labels(labels: np.ndarray, n_hat: int) -> np.ndarray:
    """N x n_hat one-hot matrix from compact labels in [0, n_hat)."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.min(initial=0) < 0 or labels.max(initial=0) >= n_hat:
        raise ValueError(f"labels must lie in [0, {n_hat})")
    f = np.zeros((len(labels), n_hat))
    f[np.arange(len(labels)), labels] = 1.0
    return f


def labels_from_indicator(f: np.ndarray) -> np.ndarray:
    return np.argmax(f, axis=1).astype(np.int64)


def is_indicator(f: np.ndarray) -> bool:
    """True iff every row is exactly a standard basis vector."""
    if f.ndim != 2:
        return False
    ones = f == 1.0
    return bool(np.all((ones.sum(axis=1) == 1) & (np.abs(f).sum(axis=1) == 1.0)))


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

def modularity(g: Graph, p: Partition, gamma: float) -> float:
    """Newman-Girvan modularity with resolution gamma, diagonal included.

    Q = (1/2m) sum_ij (w_ij - gamma k_i k_j / 2m) delta(g_i, g_j).
    Unassigned labels are allowed only on zero-strength nodes (they
    contribute nothing either way).
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    two_m = g.total_weight_2m
    if two_m <= 0:
        raise ValueError("modularity is undefined for a graph with 2m = 0")
    labels = p.labels
    if len(labels) != g.n_nodes:
        raise ValueError("partition size does not match graph")
    unassigned = labels < 0
    if np.any(g.strengths[unassigned] > 0):
        bad = int(np.flatnonzero(unassigned & (g.strengths > 0))[0])
        raise ValueError(f"node {bad} has positive strength but no community")

    same = labels[g.edge_i] == labels[g.edge_j]
    assigned_same = same & ~unassigned[g.edge_i]
    w_within = g.edge_w[assigned_same]
    diag = g.edge_i[assigned_same] == g.edge_j[assigned_same]
    # canonical edges hold each off-diagonal pair once; delta-sum needs both orders
    sum_w_same = 2.0 * float(w_within.sum()) - float(w_within[diag].sum())

    assigned = ~unassigned
    vols = np.bincount(labels[assigned], weights=g.strengths[assigned])
    return sum_w_same / two_m - gamma * float(vols @ vols) / two_m ** 2


def weighted_mean(g: Graph, f: np.ndarray) -> np.ndarray:
    """mean(f)^(l) = (1/2m) sum_i k_i f_i^(l)."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim == 1:
        f = f[:, None]
    if g.total_weight_2m <= 0:
        raise ValueError("weighted mean is undefined for a graph with 2m = 0")
    return (g.strengths @ f) / g.total_weight_2m


def tv(g: Graph, f: np.ndarray) -> float:
    """Graph total variation (1/2) sum_ij w_ij ||f_i - f_j||_l1."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim == 1:
        f = f[:, None]
    if not np.all(np.isfinite(f)):
        raise ValueError("partition function must be finite")
    diff = np.abs(f[g.edge_i] - f[g.edge_j]).sum(axis=1)
    return float(g.edge_w @ diff)  # canonical edges: each unordered pair once


def balance(g: Graph, f: np.ndarray) -> float:
    """||f - mean(f)||^2 in the strength-weighted l2 norm."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim == 1:
        f = f[:, None]
    if not np.all(np.isfinite(f)):
        raise ValueError("partition function must be finite")
    centered = f - weighted_mean(g, f)
    return float(np.sum(g.strengths[:, None] * centered * centered))


def energy_h(g: Graph, f: np.ndarray, gamma: float) -> float:
    """H(f) = |f|_TV - gamma ||f - mean(f)||^2 for indicator-valued f."""
    f = np.asarray(f, dtype=np.float64)
    if not is_indicator(f):
        raise ValueError("energy_h requires an indicator-valued partition function")
    return tv(g, f) - gamma * balance(g, f)


def partition_from_indicator(f: np.ndarray) -> Partition:
    return Partition(labels_from_indicator(f)).compacted()


def energy_h_subgraph(g: Graph, nodes: np.ndarray, f: np.ndarray,
                      gamma: float) -> float:
    """Recursion energy of a sub-partition f of the node subset S.

    H_S(f) = |f|_TV,S - gamma (m_S / m) ||f - mean_S(f)||^2 where the TV runs
    over edges inside S, 2m_S = sum_{i in S} k_i with the full-graph
    strengths, and mean_S is normalized by 2m_S.  Minimizing H_S over
    sub-partitions of a community S maximizes the global modularity gain of
    the split; H_S = 0 for f constant on S.
    """
    idx = np.asarray(list(nodes) if isinstance(nodes, (set, frozenset))
                     else nodes, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("node subset is empty")
    if idx.min() < 0 or idx.max() >= g.n_nodes:
        raise ValueError("node index out of range")
    f = np.asarray(f, dtype=np.float64)
    if f.ndim == 1:
        f = f[:, None]
    if f.shape[0] != idx.size:
        raise ValueError("partition function rows must match the subset size")
    if not np.all(np.isfinite(f)):
        raise ValueError("partition function must be finite")

    k_s = g.strengths[idx]
    two_m_s = float(k_s.sum())
    if two_m_s <= 0:
        raise ValueError("subset has zero total strength (2m_S = 0)")

    pos = np.full(g.n_nodes, -1, dtype=np.int64)
    pos[idx] = np.arange(idx.size)
    inside = (pos[g.edge_i] >= 0) & (pos[g.edge_j] >= 0)
    fi = f[pos[g.edge_i[inside]]]
    fj = f[pos[g.edge_j[inside]]]
    tv_s = float(g.edge_w[inside] @ np.abs(fi - fj).sum(axis=1))

    mean_s = (k_s @ f) / two_m_s
    centered = f - mean_s
    bal_s = float(np.sum(k_s[:, None] * centered * centered))

    return tv_s - gamma * (two_m_s / g.total_weight_2m) * bal_s
