import json

import numpy as np
import pytest

from oracles import make_network, random_weighted_graph
from topiknet.community import Partition
from topiknet.errors import ConfigError
from topiknet.exports import (export_graph, read_edge_csv, read_graph_json,
                              read_graphml, read_metrics_csv,
                              read_partition_csv, write_edge_csv,
                              write_graphml, write_metrics_csv,
                              write_partition_csv)
from topiknet.metrics import compute_node_metrics
from topiknet.months import MonthRange
from topiknet.network import TopicNetwork


def network_with_p(seed=0, n=6):
    rng = np.random.default_rng(seed)
    w = random_weighted_graph(rng, n, p=0.6)
    p = np.full((n, n), np.nan)
    mask = w > 0
    p[mask] = rng.uniform(1e-6, 0.04, mask.sum())
    p = np.triu(p, 1)
    p = np.where(np.triu(np.ones_like(p), 1) > 0, p, 0) + p.T
    p[~mask] = np.nan
    np.fill_diagonal(p, np.nan)
    return TopicNetwork(
        topics=tuple(f"topic {i}" for i in range(n)),
        adjacency=w,
        p_values=p,
        node_prevalence=rng.uniform(0.01, 0.9, n),
        window=MonthRange.from_labels("2009-03", "2011-07"),
        article_count=321,
    )


class TestGraphML:
    def test_round_trip_exact(self, tmp_path):
        net = network_with_p()
        path = tmp_path / "net.graphml"
        write_graphml(net, path)
        back = read_graphml(path)
        assert back.topics == net.topics
        assert np.array_equal(back.adjacency, net.adjacency)
        assert np.array_equal(back.node_prevalence, net.node_prevalence)
        mask = net.adjacency > 0
        assert np.array_equal(back.p_values[mask], net.p_values[mask])
        assert back.window == net.window
        assert back.article_count == 321

    def test_three_node_round_trip(self, tmp_path):
        w = np.zeros((3, 3))
        w[0, 1] = w[1, 0] = 1 / 3
        net = make_network(w, topics=("aa", "bb", "cc"))
        path = tmp_path / "small.graphml"
        write_graphml(net, path)
        assert np.array_equal(read_graphml(path).adjacency, w)

    def test_partition_and_metrics_attributes(self, tmp_path):
        net = network_with_p(seed=3)
        partition = Partition(labels=(0, 0, 1, 1, 2, 2), q=0.31)
        nm = compute_node_metrics(net, partition.labels)
        path = tmp_path / "full.graphml"
        write_graphml(net, path, partition, nm)
        text = path.read_text()
        assert 'attr.name="community"' in text
        assert 'attr.name="betweenness"' in text

    def test_deterministic_bytes(self, tmp_path):
        net = network_with_p(seed=4)
        p1, p2 = tmp_path / "a.graphml", tmp_path / "b.graphml"
        write_graphml(net, p1)
        write_graphml(net, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestEdgeCSV:
    def test_round_trip_and_ordering(self, tmp_path):
        net = network_with_p(seed=5)
        path = tmp_path / "edges.csv"
        write_edge_csv(net, path)
        rows = read_edge_csv(path)
        assert rows == sorted(rows, key=lambda r: (r[0], r[1]))
        idx = {t: i for i, t in enumerate(net.topics)}
        assert len(rows) == net.n_edges
        for a, b, phi, p in rows:
            i, j = idx[a], idx[b]
            assert abs(net.adjacency[i, j] - phi) < 1e-12
            assert abs(net.p_values[i, j] - p) < 1e-12


class TestExportGraph:
    def test_json_counts(self, tmp_path):
        net = network_with_p(seed=6)
        partition = Partition(labels=(0, 1, 0, 1, 0, 1), q=0.2)
        nm = compute_node_metrics(net, partition.labels)
        path = tmp_path / "net.json"
        export_graph(net, partition, nm, "json", path)
        payload = json.loads(path.read_text())
        assert len(payload["nodes"]) == net.n_nodes
        assert len(payload["edges"]) == net.n_edges
        assert payload["article_count"] == 321
        assert {"topic", "prevalence", "community", "degree"} <= set(payload["nodes"][0])

    def test_csv_dispatch(self, tmp_path):
        net = network_with_p(seed=7)
        path = tmp_path / "net.csv"
        export_graph(net, None, None, "csv", path)
        assert read_edge_csv(path)

    def test_json_round_trip(self, tmp_path):
        net = network_with_p(seed=10)
        path = tmp_path / "net.json"
        export_graph(net, None, None, "json", path)
        back = read_graph_json(path)
        assert back.topics == net.topics
        assert np.array_equal(back.adjacency, net.adjacency)
        assert np.array_equal(back.node_prevalence, net.node_prevalence)
        mask = net.adjacency > 0
        assert np.array_equal(back.p_values[mask], net.p_values[mask])
        assert back.window == net.window and back.article_count == 321

    def test_unknown_format_lists_supported(self, tmp_path):
        net = network_with_p(seed=8)
        with pytest.raises(ConfigError, match="graphml, json, csv"):
            export_graph(net, None, None, "parquet", tmp_path / "x")


class TestTableFiles:
    def test_partition_round_trip(self, tmp_path):
        topics = ("a", "b", "c")
        partition = Partition(labels=(1, 0, 1), q=0.1)
        path = tmp_path / "partition.csv"
        write_partition_csv(topics, partition, path)
        assert read_partition_csv(path) == {"a": 1, "b": 0, "c": 1}

    def test_metrics_header(self, tmp_path):
        net = network_with_p(seed=9)
        nm = compute_node_metrics(net, [0] * net.n_nodes)
        path = tmp_path / "metrics.csv"
        write_metrics_csv(nm, path)
        header = path.read_text().splitlines()[0]
        assert header == (
            "topic,degree,strength,strength_per_edge,clustering,"
            "betweenness,participation,neighbor_prevalence"
        )

    def test_metrics_round_trip(self, tmp_path):
        net = network_with_p(seed=12)
        nm = compute_node_metrics(net, [0, 1] * (net.n_nodes // 2))
        path = tmp_path / "metrics.csv"
        write_metrics_csv(nm, path)
        back = read_metrics_csv(path)
        for a, b in zip(nm, back):
            assert a.topic == b.topic and a.degree == b.degree
            for f in ("strength", "strength_per_edge", "clustering",
                      "betweenness", "participation", "neighbor_prevalence"):
                x, y = getattr(a, f), getattr(b, f)
                assert (np.isnan(x) and np.isnan(y)) or x == y
