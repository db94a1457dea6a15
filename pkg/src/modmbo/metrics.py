"""Partition-comparison metrics: NMI, purity, and summary statistics.

NMI uses the entropy normalization 2 I(C, C') / (H(C) + H(C')) with natural
logarithms.  Zero-entropy convention: two single-community partitions are
identical, so NMI = 1; if exactly one side has zero entropy the numerator
vanishes and NMI = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functional import Partition


@dataclass(frozen=True)
class ContingencyTable:
    """Counts |C_k ∩ C'_l| with marginals; entries sum to N."""

    counts: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    n: int

    @classmethod
    def from_partitions(cls, a: Partition, b: Partition) -> "ContingencyTable":
        la = _metric_labels(a)
        lb = _metric_labels(b)
        if len(la) != len(lb):
            raise ValueError("partitions must cover the same node set")
        n = len(la)
        ka = int(la.max()) + 1 if n else 0
        kb = int(lb.max()) + 1 if n else 0
        counts = np.zeros((ka, kb), dtype=np.int64)
        np.add.at(counts, (la, lb), 1)
        return cls(counts=counts, row_marginals=counts.sum(axis=1),
                   col_marginals=counts.sum(axis=0), n=n)


def _metric_labels(p: Partition) -> np.ndarray:
    """Compact labels with unassigned nodes grouped as one extra community."""
    labels = p.compacted().labels.copy()
    if np.any(labels < 0):
        labels[labels < 0] = labels.max() + 1
    return labels


def _entropy(marginals: np.ndarray, n: int) -> float:
    p = marginals[marginals > 0] / n
    return float(-(p @ np.log(p)))


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information in [0, 1]; 1 iff identical partitions."""
    table = ContingencyTable.from_partitions(a, b)
    if table.n == 0:
        return 1.0
    ha = _entropy(table.row_marginals, table.n)
    hb = _entropy(table.col_marginals, table.n)
    if ha == 0.0 and hb == 0.0:
        return 1.0  # both single-community partitions of the same nodes
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = table.counts > 0
    p_joint = table.counts[nz] / table.n
    outer = np.outer(table.row_marginals, table.col_marginals)[nz] / table.n ** 2
    info = float(p_joint @ np.log(p_joint / outer))
    return float(np.clip(2.0 * info / (ha + hb), 0.0, 1.0))


def purity(c: Partition, truth: Partition) -> float:
    """Fraction of nodes whose community's plurality truth label matches."""
    table = ContingencyTable.from_partitions(c, truth)
    if table.n == 0:
        return 1.0
    return float(table.counts.max(axis=1).sum() / table.n)


def community_sizes(p: Partition) -> np.ndarray:
    """Sorted (descending) sizes of the nonempty communities."""
    labels = p.labels[p.labels >= 0]
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)
    sizes = np.bincount(labels)
    return np.sort(sizes[sizes > 0])[::-1]
