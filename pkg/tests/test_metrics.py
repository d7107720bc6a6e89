import numpy as np
import pytest

from oracles import (brute_betweenness, brute_clustering, brute_distances,
                     brute_participation, make_network, random_weighted_graph)
from topiknet.errors import DataError
from topiknet.metrics import (betweenness, char_path_length, clustering_barrat,
                              degree_strength, global_metrics,
                              neighbor_prevalence, participation,
                              shortest_distances)


def triangle(w=0.5):
    m = np.zeros((3, 3))
    m[0, 1] = m[1, 0] = w
    m[0, 2] = m[2, 0] = w
    m[1, 2] = m[2, 1] = w
    return m


class TestDegreeStrength:
    def test_isolated_node(self):
        net = make_network(np.zeros((2, 2)))
        k, s = degree_strength(net)
        assert k.tolist() == [0, 0] and s.tolist() == [0.0, 0.0]

    def test_triangle(self):
        k, s = degree_strength(make_network(triangle(0.5)))
        assert k.tolist() == [2, 2, 2]
        assert s.tolist() == [1.0, 1.0, 1.0]

    def test_hand_sums(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 0.6
        w[0, 2] = w[2, 0] = 0.4
        w[1, 2] = w[2, 1] = 0.2
        w[0, 3] = w[3, 0] = 0.8
        k, s = degree_strength(make_network(w))
        assert k.tolist() == [3, 2, 2, 1]
        assert np.allclose(s, [1.8, 0.8, 0.6, 0.8])

    def test_strength_is_twice_total_weight(self):
        rng = np.random.default_rng(0)
        w = random_weighted_graph(rng, 9)
        _, s = degree_strength(make_network(w))
        assert s.sum() == pytest.approx(2 * np.triu(w).sum(), rel=1e-12)


class TestClustering:
    def test_equal_weight_triangle(self):
        c = clustering_barrat(make_network(triangle(0.7)))
        assert np.allclose(c, 1.0)

    def test_star_center(self):
        w = np.zeros((4, 4))
        for leaf in (1, 2, 3):
            w[0, leaf] = w[leaf, 0] = 0.5
        c = clustering_barrat(make_network(w))
        assert c[0] == 0.0
        assert np.all(c[1:] == 0.0)  # degree-1 leaves default to 0

    def test_hand_example(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 0.6
        w[0, 2] = w[2, 0] = 0.4
        w[1, 2] = w[2, 1] = 0.2
        w[0, 3] = w[3, 0] = 0.8
        c = clustering_barrat(make_network(w))
        assert c[0] == pytest.approx(1.0 / 3.6, abs=1e-12)

    def test_matches_binary_clustering_for_equal_weights(self):
        rng = np.random.default_rng(4)
        a = (random_weighted_graph(rng, 8, p=0.5) > 0).astype(float) * 0.37
        c = clustering_barrat(make_network(a))
        adj = a > 0
        k = adj.sum(axis=1)
        for i in range(8):
            if k[i] < 2:
                assert c[i] == 0.0
                continue
            triangles = 0
            for h in range(8):
                for j in range(8):
                    if adj[i, h] and adj[i, j] and adj[h, j]:
                        triangles += 1
            assert c[i] == pytest.approx(triangles / (k[i] * (k[i] - 1)), abs=1e-12)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            w = random_weighted_graph(rng, int(rng.integers(4, 9)))
            c = clustering_barrat(make_network(w))
            assert np.allclose(c, brute_clustering(w), atol=1e-12)
            assert np.all(c >= 0) and np.all(c <= 1 + 1e-12)


class TestDistances:
    def test_single_edge(self):
        w = np.array([[0, 0.5], [0.5, 0]])
        d = shortest_distances(make_network(w))
        assert d[0, 1] == 2.0

    def test_chain_beats_direct(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        w[1, 2] = w[2, 1] = 1.0
        w[0, 2] = w[2, 0] = 0.4
        d = shortest_distances(make_network(w))
        assert d[0, 2] == pytest.approx(2.0)

    def test_disconnected_pair(self):
        d = shortest_distances(make_network(np.zeros((2, 2))))
        assert np.isinf(d[0, 1])

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            w = random_weighted_graph(rng, int(rng.integers(4, 8)), p=0.45)
            d = shortest_distances(make_network(w))
            expected = brute_distances(w)
            assert np.allclose(d, expected, atol=1e-9, equal_nan=False)


class TestCharPathLength:
    def test_complete_unit_graph(self):
        w = 1.0 - np.eye(4)
        pl = char_path_length(shortest_distances(make_network(w)))
        assert pl.value == 1.0 and pl.excluded_pairs == 0

    def test_three_chain(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        w[1, 2] = w[2, 1] = 1.0
        pl = char_path_length(shortest_distances(make_network(w)))
        assert pl.value == pytest.approx(4 / 3)

    def test_isolated_node_excluded(self):
        w = np.zeros((4, 4))
        for i in range(3):
            for j in range(3):
                if i != j:
                    w[i, j] = 1.0
        pl = char_path_length(shortest_distances(make_network(w)))
        assert pl.value == 1.0 and pl.excluded_pairs == 6

    def test_all_unreachable_errors(self):
        with pytest.raises(DataError, match="unreachable"):
            char_path_length(shortest_distances(make_network(np.zeros((3, 3)))))

    def test_single_node_errors(self):
        with pytest.raises(DataError):
            char_path_length(np.zeros((1, 1)))


class TestBetweenness:
    def test_path_center(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1.0
        w[1, 2] = w[2, 1] = 1.0
        b = betweenness(make_network(w))
        assert b.tolist() == [0.0, 1.0, 0.0]

    def test_complete_equal_weight(self):
        w = 0.8 * (1.0 - np.eye(5))
        assert np.all(betweenness(make_network(w)) == 0.0)

    def test_multiplicity_split(self):
        # two equal-length routes between 0 and 3 through 1 or 2
        w = np.zeros((4, 4))
        for i, j in ((0, 1), (0, 2), (1, 3), (2, 3)):
            w[i, j] = w[j, i] = 1.0
        b = betweenness(make_network(w))
        assert b[1] == pytest.approx(b[2])
        assert b[1] == pytest.approx(0.5 / ((4 - 1) * (4 - 2)) * 2)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            w = random_weighted_graph(rng, int(rng.integers(4, 8)), p=0.5)
            b = betweenness(make_network(w))
            assert np.allclose(b, brute_betweenness(w), atol=1e-9)

    def test_needs_three_nodes(self):
        with pytest.raises(DataError):
            betweenness(make_network(np.zeros((2, 2))))


class TestParticipation:
    def test_all_intra(self):
        p = participation(make_network(triangle()), [0, 0, 0])
        assert np.all(p == 0.0)

    def test_even_split(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 0.3
        w[0, 2] = w[2, 0] = 0.3
        p = participation(make_network(w), [0, 0, 1])
        assert p[0] == pytest.approx(0.5)

    def test_uneven_split(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 0.75
        w[0, 2] = w[2, 0] = 0.25
        p = participation(make_network(w), [0, 0, 1])
        assert p[0] == pytest.approx(0.375)

    def test_zero_strength_is_zero(self):
        w = np.zeros((2, 2))
        assert participation(make_network(w), [0, 1]).tolist() == [0.0, 0.0]

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            n = int(rng.integers(4, 9))
            w = random_weighted_graph(rng, n)
            labels = rng.integers(0, 3, n)
            p = participation(make_network(w), labels)
            assert np.allclose(p, brute_participation(w, labels), atol=1e-12)
            n_modules = len(np.unique(labels))
            assert np.all(p >= 0.0)
            assert np.all(p <= 1.0 - 1.0 / n_modules + 1e-12)

    def test_partition_must_cover(self):
        with pytest.raises(DataError):
            participation(make_network(triangle()), [0, 1])


class TestNeighborPrevalence:
    def test_single_neighbor(self):
        w = np.array([[0, 0.4], [0.4, 0]])
        net = make_network(w, prevalence=[0.9, 0.2])
        assert neighbor_prevalence(net)[0] == pytest.approx(0.2)

    def test_hand_example(self):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 0.3
        w[0, 2] = w[2, 0] = 0.1
        net = make_network(w, prevalence=[0.7, 0.1, 0.5])
        assert neighbor_prevalence(net)[0] == pytest.approx(0.2)

    def test_equal_prevalence_collapses(self):
        rng = np.random.default_rng(2)
        w = random_weighted_graph(rng, 6, p=0.7)
        net = make_network(w, prevalence=np.full(6, 0.33))
        xi = neighbor_prevalence(net)
        k = (w > 0).sum(axis=1)
        assert np.allclose(xi[k > 0], 0.33)

    def test_isolated_missing(self):
        assert np.isnan(neighbor_prevalence(make_network(np.zeros((2, 2))))[0])

    def test_convex_combination_bounds(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = int(rng.integers(3, 9))
            w = random_weighted_graph(rng, n, p=0.6)
            prev = rng.uniform(0, 1, n)
            net = make_network(w, prevalence=prev)
            xi = neighbor_prevalence(net)
            for i in range(n):
                nbrs = np.nonzero(w[i])[0]
                if nbrs.size == 0:
                    assert np.isnan(xi[i])
                else:
                    assert prev[nbrs].min() - 1e-12 <= xi[i] <= prev[nbrs].max() + 1e-12


class TestScalingInvariance:
    def test_weight_scaling(self):
        rng = np.random.default_rng(19)
        w = random_weighted_graph(rng, 7, p=0.6)
        prev = rng.uniform(0.1, 0.9, 7)
        labels = rng.integers(0, 2, 7)
        lam = 3.7
        a, b = make_network(w, prevalence=prev), make_network(lam * w, prevalence=prev)
        k1, s1 = degree_strength(a)
        k2, s2 = degree_strength(b)
        assert np.array_equal(k1, k2)
        assert np.allclose(s2, lam * s1)
        assert np.allclose(clustering_barrat(a), clustering_barrat(b))
        assert np.allclose(betweenness(a), betweenness(b))
        assert np.allclose(participation(a, labels), participation(b, labels))
        assert np.allclose(
            neighbor_prevalence(a), neighbor_prevalence(b), equal_nan=True
        )
        assert np.allclose(
            shortest_distances(b), shortest_distances(a) / lam
        )


class TestGlobalMetrics:
    def test_triangle_summary(self):
        gm = global_metrics(make_network(triangle(1.0)))
        assert gm.mean_clustering == pytest.approx(1.0)
        assert gm.char_path_length == pytest.approx(1.0)
        assert gm.density == pytest.approx(1.0)
        assert gm.excluded_pairs == 0
