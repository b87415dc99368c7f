import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopgrow import GrowthMechanism, Network, write_edge_list

from conftest import random_simple_graph


def star(leaves: int = 3) -> Network:
    return Network.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def assert_simple_and_symmetric(net: Network):
    for i in range(net.num_nodes):
        nbrs = [int(x) for x in net.neighbors(i)]
        assert i not in nbrs
        assert len(set(nbrs)) == len(nbrs)
        for j in nbrs:
            assert i in net.neighbors(j)
    assert net.degree_sum == int(net.degrees.sum()) == 2 * net.edge_count


class TestSeedClique:
    @pytest.mark.parametrize("n0,edges", [(2, 1), (4, 6), (1, 0)])
    def test_examples(self, n0, edges):
        net = Network(n0)
        assert net.num_nodes == n0
        assert net.edge_count == edges
        assert_simple_and_symmetric(net)

    def test_zero_nodes_rejected(self):
        with pytest.raises(ValueError):
            Network(0)

    def test_clique_degrees(self):
        assert Network(4).degree(0) == 3
        assert sorted(Network(5).neighbors(2).tolist()) == [0, 1, 3, 4]


class TestFromEdges:
    def test_star_layout(self):
        net = star()
        assert net.degrees.tolist() == [3, 1, 1, 1]

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Network.from_edges(3, [(0, 0)])

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError, match="duplicate"):
            Network.from_edges(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            Network.from_edges(3, [(0, 3)])


class TestTargetSampling:
    def test_star_preferential_hub_probability(self, rng):
        # brute force from the degree weights: P(hub) = 3 / 6 = 0.5
        net = star()
        trials = 100_000
        hits = sum(int(net.sample_targets_preferential(1, rng)[0] == 0) for _ in range(trials))
        se = math.sqrt(0.5 * 0.5 / trials)
        assert abs(hits / trials - 0.5) < 3 * se

    def test_star_random_hub_probability(self, rng):
        net = star()
        trials = 100_000
        hits = sum(int(net.sample_targets_random(1, rng)[0] == 0) for _ in range(trials))
        se = math.sqrt(0.25 * 0.75 / trials)
        assert abs(hits / trials - 0.25) < 3 * se

    def test_clique_preferential_is_uniform(self, rng):
        net = Network(5)
        trials = 50_000
        counts = np.zeros(5)
        for _ in range(trials):
            counts[int(net.sample_targets_preferential(1, rng)[0])] += 1
        se = math.sqrt(0.2 * 0.8 / trials)
        assert np.all(np.abs(counts / trials - 0.2) < 3 * se)

    def test_fixed_graph_single_draw_matches_degree_weights(self, rng):
        # degrees 3,2,2,2,1 -> probabilities k/10
        net = Network.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4)])
        expected = net.degrees / net.degree_sum
        trials = 100_000
        counts = np.zeros(5)
        for _ in range(trials):
            counts[int(net.sample_targets_preferential(1, rng)[0])] += 1
        freq = counts / trials
        se = np.sqrt(expected * (1 - expected) / trials)
        assert np.all(np.abs(freq - expected) < 3 * se)

    def test_sequential_renormalization_on_star(self, rng):
        # two draws without replacement: P(hub in pair) = 1/2 + 1/2 * 3/5 = 0.8
        # (first draw 3/6 hub; if a leaf came first the hub keeps weight 3 of 5)
        net = star()
        trials = 100_000
        hits = sum(0 in net.sample_targets_preferential(2, rng) for _ in range(trials))
        se = math.sqrt(0.8 * 0.2 / trials)
        assert abs(hits / trials - 0.8) < 3 * se

    @pytest.mark.parametrize("mech", list(GrowthMechanism))
    def test_exhaustion_connects_to_all(self, mech, rng):
        net = Network(4)
        new = net.add_node(mech, 4, rng)
        assert sorted(net.neighbors(new).tolist()) == [0, 1, 2, 3]

    def test_too_many_links_rejected(self, rng):
        net = Network(3)
        with pytest.raises(ValueError):
            net.add_node_preferential(4, rng)
        with pytest.raises(ValueError):
            net.add_node_random(4, rng)
        with pytest.raises(ValueError):
            net.add_node_random(0, rng)

    def test_single_node_seed_first_attachment(self, rng):
        # all degree weights are zero on an edgeless seed; the draw is uniform
        net = Network(1)
        new = net.add_node_preferential(1, rng)
        assert new == 1
        assert net.neighbors(1).tolist() == [0]

    def test_preferential_skips_isolated_nodes(self, rng):
        # degree-zero nodes carry no weight, so they are never drawn
        net = Network.from_edges(4, [(0, 1)])
        for _ in range(200):
            t = int(net.sample_targets_preferential(1, rng)[0])
            assert t in (0, 1)
        with pytest.raises(ValueError, match="nonzero degree"):
            net.sample_targets_preferential(3, rng)


class TestGrowth:
    @pytest.mark.parametrize("mech", list(GrowthMechanism))
    def test_random_attachment_postconditions(self, mech, rng):
        net = Network(4)
        while net.num_nodes < 100:
            net.add_node(mech, 4, rng)
        new = net.add_node(mech, 4, rng)
        assert net.degree(new) == 4
        assert net.edge_count == 6 + 4 * 97

    def test_mean_degree_approaches_twice_links(self, rng):
        L = 4
        net = Network(L)
        while net.num_nodes < 100 * L:
            net.add_node_preferential(L, rng)
        mean_degree = net.degree_sum / net.num_nodes
        assert abs(mean_degree - 2 * L) < 0.1 * L

    @settings(max_examples=25, deadline=None)
    @given(
        n0=st.integers(1, 6),
        extra=st.integers(0, 40),
        mech=st.sampled_from(list(GrowthMechanism)),
        seed=st.integers(0, 2**32 - 1),
        data=st.data(),
    )
    def test_grown_network_invariants(self, n0, extra, mech, seed, data):
        L = data.draw(st.integers(1, n0))
        rng = np.random.default_rng(seed)
        net = Network(n0)
        for _ in range(extra):
            net.add_node(mech, L, rng)
        assert net.num_nodes == n0 + extra
        assert net.edge_count == n0 * (n0 - 1) // 2 + L * extra
        assert_simple_and_symmetric(net)

    def test_symmetry_on_random_instances(self, rng):
        for _ in range(5):
            assert_simple_and_symmetric(random_simple_graph(rng, 40))

    def test_degree_queries_validate_index(self):
        net = Network(3)
        with pytest.raises(ValueError):
            net.degree(3)
        with pytest.raises(ValueError):
            net.neighbors(-1)


class TestEdgeListExport:
    def test_format(self, rng):
        net = Network(3)
        net.add_node_random(2, rng)
        buf = io.StringIO()
        write_edge_list(net, buf, mechanism=GrowthMechanism.RANDOM, L=2, seed=7)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# nodes=4 edges=5 mechanism=random L=2 seed=7"
        assert lines[1:4] == ["0 1", "0 2", "1 2"]
        assert len(lines) == 1 + net.edge_count
        for line in lines[1:]:
            i, j = map(int, line.split())
            assert i < j

    def test_round_trip_to_file(self, tmp_path, rng):
        net = Network(4)
        for _ in range(10):
            net.add_node_preferential(3, rng)
        path = tmp_path / "net.edges"
        write_edge_list(net, path, mechanism="ba", L=3, seed=1)
        body = path.read_text().splitlines()
        edges = [tuple(map(int, line.split())) for line in body[1:]]
        rebuilt = Network.from_edges(net.num_nodes, edges)
        assert rebuilt.edge_count == net.edge_count
        assert np.array_equal(np.sort(rebuilt.degrees), np.sort(net.degrees))
