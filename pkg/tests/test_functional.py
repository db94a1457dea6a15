import itertools

import numpy as np
import pytest

from modmbo import (Partition, balance, build_graph, cut, energy_h,
                    energy_h_subgraph, indicator_from_labels, modularity, tv,
                    volume, weighted_mean)

from conftest import random_graph, set_partitions_upto


class TestPartition:
    def test_compaction(self):
        p = Partition(np.array([5, 5, 2, 9, 2]))
        np.testing.assert_array_equal(p.compacted().labels, [0, 0, 1, 2, 1])
        assert p.n_communities == 3

    def test_unassigned_preserved(self):
        p = Partition(np.array([3, -1, 3]))
        np.testing.assert_array_equal(p.compacted().labels, [0, -1, 0])
        assert p.n_communities == 1

    def test_same_as_ignores_label_names(self):
        a = Partition(np.array([0, 0, 1, 1]))
        b = Partition(np.array([7, 7, 3, 3]))
        assert a.same_as(b)
        assert not a.same_as(Partition(np.array([0, 1, 0, 1])))

    def test_bad_labels_rejected(self):
        with pytest.raises(ValueError):
            Partition(np.array([0, -2]))


class TestModularity:
    def test_single_community_is_zero(self, two_triangles):
        p = Partition(np.zeros(6, dtype=np.int64))
        assert modularity(two_triangles, p, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_two_triangle_split(self, two_triangles):
        p = Partition(np.array([0, 0, 0, 1, 1, 1]))
        assert modularity(two_triangles, p, 1.0) == pytest.approx(0.5, abs=1e-14)

    def test_matches_dense_definition(self):
        # brute-force against the defining double sum (diagonal included)
        for seed in range(8):
            g = random_graph(7, seed=seed)
            w = g.adjacency.toarray()
            k = g.strengths
            two_m = g.total_weight_2m
            rng = np.random.default_rng(seed)
            labels = rng.integers(0, 3, size=7)
            for gamma in (0.5, 1.0, 2.0):
                delta = labels[:, None] == labels[None, :]
                q_ref = float(np.sum((w - gamma * np.outer(k, k) / two_m) * delta)) / two_m
                q = modularity(g, Partition(labels), gamma)
                assert q == pytest.approx(q_ref, abs=1e-12)

    def test_relabeling_invariance(self):
        g = random_graph(9, seed=1)
        labels = np.array([0, 1, 2, 0, 1, 2, 0, 1, 2])
        q1 = modularity(g, Partition(labels), 1.0)
        q2 = modularity(g, Partition((labels + 1) % 3), 1.0)
        assert q1 == pytest.approx(q2, abs=1e-14)

    def test_empty_graph_rejected(self):
        g = build_graph([], n_nodes=3)
        with pytest.raises(ValueError, match="2m = 0"):
            modularity(g, Partition(np.zeros(3, dtype=np.int64)), 1.0)

    def test_unassigned_connected_node_rejected(self, path3):
        with pytest.raises(ValueError, match="no community"):
            modularity(path3, Partition(np.array([0, -1, 0])), 1.0)

    def test_isolated_node_may_be_unassigned(self):
        g = build_graph([(0, 1, 1.0)], n_nodes=3)
        q = modularity(g, Partition(np.array([0, 0, -1])), 1.0)
        assert q == pytest.approx(0.0, abs=1e-14)


class TestTvMeanBalance:
    def test_tv_zero_within_component(self, two_triangles):
        f = indicator_from_labels(np.array([0, 0, 0, 1, 1, 1]), 2)
        assert tv(two_triangles, f) == 0.0

    def test_tv_equals_cut_for_indicators(self, path3):
        f = np.array([1.0, 0.0, 0.0])
        assert tv(path3, f) == cut(path3, [0]) == 1.0

    def test_tv_cut_identity_random(self):
        for seed in range(6):
            g = random_graph(8, seed=seed)
            rng = np.random.default_rng(seed)
            subset = np.flatnonzero(rng.random(8) < 0.5)
            chi = np.zeros(8)
            chi[subset] = 1.0
            assert tv(g, chi) == pytest.approx(cut(g, subset), abs=1e-12)

    def test_balance_identity_for_indicator(self, two_triangles):
        # ||chi_A - mean||^2 = vol(A) vol(A^c) / 2m
        chi = np.zeros(6)
        chi[:3] = 1.0
        expected = volume(two_triangles, [0, 1, 2]) * volume(two_triangles, [3, 4, 5]) / 12.0
        assert balance(two_triangles, chi) == pytest.approx(expected, abs=1e-12)

    def test_balance_identity_random(self):
        for seed in range(6):
            g = random_graph(8, seed=seed)
            rng = np.random.default_rng(seed + 50)
            subset = np.flatnonzero(rng.random(8) < 0.5)
            comp = np.setdiff1d(np.arange(8), subset)
            chi = np.zeros(8)
            chi[subset] = 1.0
            expected = volume(g, subset) * volume(g, comp) / g.total_weight_2m
            assert balance(g, chi) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_weighted_mean_definition(self, path3):
        f = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        # strengths (1, 2, 1), 2m = 4
        np.testing.assert_allclose(weighted_mean(path3, f), [0.5, 0.5])

    def test_vector_forms_reduce_to_scalar(self):
        g = random_graph(6, seed=2)
        rng = np.random.default_rng(7)
        z = rng.standard_normal(6)
        assert tv(g, z) == pytest.approx(tv(g, z[:, None]), abs=1e-12)
        assert balance(g, z) == pytest.approx(balance(g, z[:, None]), abs=1e-12)


class TestEnergy:
    def test_single_community_energy_zero(self, two_triangles):
        f = indicator_from_labels(np.zeros(6, dtype=np.int64), 2)
        assert energy_h(two_triangles, f, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_two_triangle_split_energy(self, two_triangles):
        f = indicator_from_labels(np.array([0, 0, 0, 1, 1, 1]), 2)
        assert energy_h(two_triangles, f, 1.0) == pytest.approx(-6.0, abs=1e-12)

    def test_non_indicator_rejected(self, path3):
        with pytest.raises(ValueError, match="indicator"):
            energy_h(path3, np.array([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]]), 1.0)

    def test_q_h_identity_exhaustive_six_nodes(self):
        # brute force over all <=3-block partitions of random 6-node graphs
        for seed in range(5):
            g = random_graph(6, seed=seed)
            two_m = g.total_weight_2m
            for labels in set_partitions_upto(6, 3):
                arr = np.asarray(labels)
                f = indicator_from_labels(arr, 3)
                for gamma in (0.5, 1.0, 2.0):
                    q = modularity(g, Partition(arr), gamma)
                    h = energy_h(g, f, gamma)
                    assert abs(q - (1.0 - gamma - h / two_m)) <= 1e-10

    def test_argmax_q_equals_argmin_h(self):
        g = random_graph(6, seed=11)
        best_q = max(set_partitions_upto(6, 3),
                     key=lambda lab: modularity(g, Partition(np.asarray(lab)), 1.0))
        best_h = min(set_partitions_upto(6, 3),
                     key=lambda lab: energy_h(g, indicator_from_labels(np.asarray(lab), 3), 1.0))
        assert Partition(np.asarray(best_q)).same_as(Partition(np.asarray(best_h)))


class TestSubgraphEnergy:
    def test_full_set_equals_energy(self, two_triangles):
        f = indicator_from_labels(np.array([0, 0, 0, 1, 1, 1]), 2)
        h_full = energy_h(two_triangles, f, 1.0)
        h_sub = energy_h_subgraph(two_triangles, np.arange(6), f, 1.0)
        assert h_sub == pytest.approx(h_full, abs=1e-12)

    def test_constant_on_subset_is_zero(self, two_triangles):
        f = indicator_from_labels(np.zeros(3, dtype=np.int64), 2)
        assert energy_h_subgraph(two_triangles, np.array([0, 1, 2]), f, 1.0) == 0.0

    def test_path_pair_hand_value(self, path3):
        f = np.array([[1.0, 0.0], [0.0, 1.0]])
        h = energy_h_subgraph(path3, np.array([0, 1]), f, 1.0)
        assert h == pytest.approx(1.0, abs=1e-12)

    def test_split_energy_matches_global_q_change(self):
        # -H_S / 2m equals the global modularity change of splitting S
        for seed in range(5):
            g = random_graph(9, seed=seed + 20)
            rng = np.random.default_rng(seed)
            labels = np.zeros(9, dtype=np.int64)
            labels[rng.random(9) < 0.5] = 1  # two communities
            members = np.flatnonzero(labels == 0)
            if len(members) < 2:
                continue
            sub = rng.integers(0, 2, size=len(members))
            if sub.min() == sub.max():
                continue
            f = indicator_from_labels(sub, 2)
            for gamma in (0.5, 1.0, 2.0):
                q_before = modularity(g, Partition(labels), gamma)
                split = labels.copy()
                split[members[sub == 1]] = 2
                q_after = modularity(g, Partition(split), gamma)
                h_s = energy_h_subgraph(g, members, f, gamma)
                assert q_after - q_before == pytest.approx(
                    -h_s / g.total_weight_2m, abs=1e-12)

    def test_zero_strength_subset_rejected(self):
        g = build_graph([(0, 1, 1.0)], n_nodes=4)
        with pytest.raises(ValueError, match="2m_S = 0"):
            energy_h_subgraph(g, np.array([2, 3]), np.eye(2), 1.0)
