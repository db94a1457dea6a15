"""Driver strategies: recursive bisection-style refinement and n-hat sweeps.

`run_rmm` applies the MBO scheme to the whole graph with a large community
budget, then recursively re-partitions every community, each time minimizing
the subgraph energy whose decrease equals the global modularity gain.  A
split is kept only if it strictly increases global modularity.

`run_multi_n` sweeps the community budget over an inclusive range, reusing
one eigenbasis, and keeps the highest-modularity partition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .eigen import EigenBasis, default_n_eig, smallest_eigenpairs
from .functional import (Partition, energy_h_subgraph, labels_from_indicator,
                         modularity)
from .graph import Graph, induced_subgraph, laplacian
from .mbo import MboConfig, MboResult, _Forcing, _iterate, initial_function, run_mbo

# recursion-node seed stride; keeps restart streams disjoint across nodes
_SEED_STRIDE = 7919


@dataclass(frozen=True)
class SchemeConfig:
    """Shared configuration of the two driver schemes.

    mbo : base MboConfig (gamma, eta, dt, seed, ... ; n_hat is overridden)
    rmm_first_nhat : community budget of the first recursive round
    rmm_later_nhat : budget of later rounds, capped at the subgraph size
    multi_n_range : inclusive (lo, hi) range of n_hat for the sweep
    restarts : random initializations per setting; restart 0 reuses the
        base seed so a degenerate sweep reproduces a single run exactly
    """

    mbo: MboConfig
    rmm_first_nhat: int = 50
    rmm_later_nhat: int = 10
    multi_n_range: tuple[int, int] | Sequence[int] | None = None
    restarts: int = 5
    eigen_tol: float = 1e-8


@dataclass(frozen=True)
class SweepEntry:
    n_hat: int
    restart: int
    seed: int
    q: float
    n_communities: int
    n_iterations: int


@dataclass(frozen=True)
class MultiSweepResult:
    partition: Partition
    entries: list[SweepEntry]
    best_entry: SweepEntry
    q_trace: list[float] = field(default_factory=list)


def _restart_seed(base: int, restart: int) -> int:
    return base if restart == 0 else base + restart


def run_multi_n(g: Graph, basis: EigenBasis,
                config: SchemeConfig) -> MultiSweepResult:
    """Sweep n_hat over the configured range, reusing the given eigenbasis.

    Returns the best partition (highest Q; ties broken by fewer communities,
    then lower n_hat) and one table entry per (n_hat, restart).
    """
    values = _range_values(config.multi_n_range)
    if config.restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {config.restarts}")

    best: tuple[MboResult, SweepEntry] | None = None
    entries: list[SweepEntry] = []
    for n_hat in values:
        for r in range(config.restarts):
            seed = _restart_seed(config.mbo.seed, r)
            result = run_mbo(g, basis, replace(config.mbo, n_hat=n_hat, seed=seed))
            entry = SweepEntry(n_hat=n_hat, restart=r, seed=seed,
                               q=result.q_trace[-1],
                               n_communities=result.partition.n_communities,
                               n_iterations=result.n_iterations)
            entries.append(entry)
            if best is None or _better(entry, best[1]):
                best = (result, entry)

    result, entry = best
    return MultiSweepResult(partition=result.partition, entries=entries,
                            best_entry=entry, q_trace=result.q_trace)


def _better(a: SweepEntry, b: SweepEntry) -> bool:
    if a.q != b.q:
        return a.q > b.q
    if a.n_communities != b.n_communities:
        return a.n_communities < b.n_communities
    return False  # first hit wins on a full tie (lower n_hat, lower restart)


def _range_values(spec) -> list[int]:
    if spec is None:
        raise ValueError("multi_n_range is required for the sweep scheme")
    if isinstance(spec, tuple) and len(spec) == 2 and all(
            isinstance(v, (int, np.integer)) for v in spec):
        lo, hi = int(spec[0]), int(spec[1])
        values = list(range(lo, hi + 1))
    else:
        values = sorted({int(v) for v in spec})
    if not values:
        raise ValueError("multi_n_range is empty")
    if values[0] < 2:
        raise ValueError(f"n_hat search range must start at >= 2, got {values[0]}")
    return values


def run_rmm(g: Graph, config: SchemeConfig) -> Partition:
    """Recursive modularity refinement.

    The first round clusters the full graph with n_hat = rmm_first_nhat.
    Every resulting community is then re-partitioned on its induced
    subgraph (fresh eigenbasis, min(rmm_later_nhat, |S|) communities, the
    balance term rescaled to target global modularity); a subdivision is
    applied only when it strictly increases the global modularity, and
    accepted parts are refined recursively.
    """
    if config.restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {config.restarts}")
    if g.n_nodes == 1:
        return Partition(np.zeros(1, dtype=np.int64))

    gamma = config.mbo.gamma
    n_eig = min(config.mbo.n_eig or default_n_eig(g.n_nodes), g.n_nodes)
    basis = smallest_eigenpairs(laplacian(g), n_eig, tol=config.eigen_tol)

    first_cfg = replace(config.mbo, n_hat=min(config.rmm_first_nhat, g.n_nodes),
                        n_eig=None)
    best: MboResult | None = None
    for r in range(config.restarts):
        result = run_mbo(g, basis, replace(first_cfg,
                                           seed=_restart_seed(config.mbo.seed, r)))
        if best is None or result.q_trace[-1] > best.q_trace[-1]:
            best = result

    labels = best.partition.labels.copy()
    q_current = best.q_trace[-1]
    next_label = int(labels.max()) + 1

    queue = deque(np.flatnonzero(labels == lab)
                  for lab in np.unique(labels[labels >= 0]))
    node_counter = 1
    while queue:
        members = queue.popleft()
        if len(members) < 2:
            continue
        split = _best_subsplit(g, members, config, n_eig, gamma,
                               seed_base=config.mbo.seed
                               + _SEED_STRIDE * node_counter)
        node_counter += 1
        if split is None:
            continue
        sub_labels = split  # compact labels on `members`, >= 2 parts
        candidate = labels.copy()
        parts = np.unique(sub_labels)
        for part in parts[1:]:  # part 0 keeps the current label
            candidate[members[sub_labels == part]] = next_label
            next_label += 1
        q_new = modularity(g, Partition(candidate), gamma)
        if q_new > q_current:
            labels = candidate
            q_current = q_new
            for part in parts:
                queue.append(members[sub_labels == part])

    return Partition(labels).compacted()


def _best_subsplit(g: Graph, members: np.ndarray, config: SchemeConfig,
                   n_eig: int, gamma: float, seed_base: int) -> np.ndarray | None:
    """Lowest-energy sub-partition of a community, or None if unsplit."""
    sub_g, idx = induced_subgraph(g, members)
    n_hat = min(config.rmm_later_nhat, len(idx))
    if n_hat < 2:
        return None
    sub_basis = smallest_eigenpairs(laplacian(sub_g), min(n_eig, len(idx)),
                                    tol=config.eigen_tol)
    k_sub = g.strengths[idx]
    two_m_sub = float(k_sub.sum())
    forcing = _Forcing(strengths=k_sub, total_2m=two_m_sub,
                       gamma=gamma * two_m_sub / g.total_weight_2m)

    best_h = 0.0  # the unsplit community has zero subgraph energy
    best_labels = None
    for r in range(config.restarts):
        f0 = initial_function(len(idx), n_hat, seed_base + r)
        indicator, _, _ = _iterate(sub_basis, f0, forcing, config.mbo)
        h = energy_h_subgraph(g, idx, indicator, gamma)
        if h < best_h:
            best_h = h
            best_labels = labels_from_indicator(indicator)

    if best_labels is None:
        return None
    compact = Partition(best_labels).compacted().labels
    if compact.max() == 0:
        return None
    return compact
