import itertools
import os

import numpy as np
import pytest

from modmbo import build_graph

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


@pytest.fixture
def triangle():
    return build_graph([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def path3():
    return build_graph([(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def two_triangles():
    return build_graph([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
                        (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)])


@pytest.fixture
def four_clique():
    return build_graph([(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)])


def random_graph(n, seed, p=0.6, weighted=True):
    """Connected-ish random weighted graph for identity checks."""
    rng = np.random.default_rng(seed)
    edges = []
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            w = float(rng.uniform(0.01, 1.0)) if weighted else 1.0
            edges.append((i, j, w))
    if not edges:
        edges = [(0, 1, 1.0)]
    return build_graph(edges, n_nodes=n)


def set_partitions_upto(n, k_max):
    """All set partitions of range(n) into at most k_max blocks.

    Yields restricted-growth label tuples, one per distinct partition.
    """
    def rec(prefix, used):
        i = len(prefix)
        if i == n:
            yield tuple(prefix)
            return
        for lab in range(min(used + 1, k_max)):
            prefix.append(lab)
            yield from rec(prefix, used + 1 if lab == used else used)
            prefix.pop()

    yield from rec([], 0)
