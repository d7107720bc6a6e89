"""Plain-text artifact writers and readers (CSV, JSON, GraphML).

Floats are rendered with repr(), the shortest exact round-trip form, so
re-importing an export reproduces the network bit-for-bit and outputs are
byte-stable across runs.
"""

from __future__ import annotations

import csv
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .community import AgreementMatrix, Partition
from .dynamics import METRICS, MetricSeries, WindowSpec
from .errors import ConfigError, DataError
from .metrics import GlobalMetrics, NodeMetrics
from .months import MonthRange, month_index
from .network import TopicNetwork
from .stats import RegressionResult

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _fmt(value: float) -> str:
    return repr(float(value))


def _jsonable(obj):
    """Recursively convert numpy scalars and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(payload: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2)
        fh.write("\n")


# -- network ---------------------------------------------------------------

def write_edge_csv(net: TopicNetwork, path: str | Path) -> None:
    """Flat edge list (topic_a, topic_b, phi, p_value), lexicographic order."""
    rows = []
    for i, j, w in net.edges():
        a, b = sorted((net.topics[i], net.topics[j]))
        rows.append((a, b, w, float(net.p_values[i, j])))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic_a", "topic_b", "phi", "p_value"])
        for a, b, w, p in rows:
            writer.writerow([a, b, _fmt(w), _fmt(p)])


def read_edge_csv(path: str | Path) -> list[tuple[str, str, float, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            (row["topic_a"], row["topic_b"], float(row["phi"]), float(row["p_value"]))
            for row in reader
        ]


def write_graphml(
    net: TopicNetwork,
    path: str | Path,
    partition: Partition | None = None,
    node_metrics: Sequence[NodeMetrics] | None = None,
) -> None:
    """GraphML export: prevalence (plus optional community and metric
    attributes) on nodes, weight and p_value on edges, window metadata on
    the graph."""
    root = ET.Element("graphml", xmlns=_GRAPHML_NS)
    keys = [
        ("window", "graph", "window", "string"),
        ("article_count", "graph", "article_count", "long"),
        ("degenerate", "graph", "degenerate", "boolean"),
        ("prevalence", "node", "prevalence", "double"),
        ("weight", "edge", "weight", "double"),
        ("p_value", "edge", "p_value", "double"),
    ]
    if partition is not None:
        keys.append(("community", "node", "community", "long"))
    metric_fields = (
        "degree", "strength", "strength_per_edge", "clustering",
        "betweenness", "participation", "neighbor_prevalence",
    )
    if node_metrics is not None:
        keys.extend((f"m_{f}", "node", f, "double") for f in metric_fields)
    for key_id, domain, name, typ in keys:
        ET.SubElement(
            root, "key", id=key_id, attrib={"for": domain},
            **{"attr.name": name, "attr.type": typ},
        )
    graph = ET.SubElement(root, "graph", edgedefault="undirected")
    ET.SubElement(graph, "data", key="window").text = net.window.label()
    ET.SubElement(graph, "data", key="article_count").text = str(net.article_count)
    ET.SubElement(graph, "data", key="degenerate").text = (
        "true" if net.degenerate else "false"
    )
    metrics_by_topic = (
        {m.topic: m for m in node_metrics} if node_metrics is not None else {}
    )
    for i, topic in enumerate(net.topics):
        node = ET.SubElement(graph, "node", id=topic)
        ET.SubElement(node, "data", key="prevalence").text = _fmt(net.node_prevalence[i])
        if partition is not None:
            ET.SubElement(node, "data", key="community").text = str(partition.labels[i])
        if topic in metrics_by_topic:
            m = metrics_by_topic[topic]
            for f in metric_fields:
                ET.SubElement(node, "data", key=f"m_{f}").text = _fmt(getattr(m, f))
    for i, j, w in net.edges():
        edge = ET.SubElement(graph, "edge", source=net.topics[i], target=net.topics[j])
        ET.SubElement(edge, "data", key="weight").text = _fmt(w)
        ET.SubElement(edge, "data", key="p_value").text = _fmt(net.p_values[i, j])
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


def read_graphml(path: str | Path) -> TopicNetwork:
    """Rebuild a network from :func:`write_graphml` output."""
    ns = {"g": _GRAPHML_NS}
    root = ET.parse(path).getroot()
    graph = root.find("g:graph", ns)
    if graph is None:
        raise DataError(f"{path}: no <graph> element")

    def data_of(elem) -> dict[str, str]:
        return {d.get("key"): (d.text or "") for d in elem.findall("g:data", ns)}

    gdata = data_of(graph)
    start, end = gdata["window"].split("..")
    window = MonthRange(month_index(start), month_index(end))
    topics = []
    prevalence = []
    for node in graph.findall("g:node", ns):
        topics.append(node.get("id"))
        prevalence.append(float(data_of(node).get("prevalence", "nan")))
    index = {t: i for i, t in enumerate(topics)}
    n = len(topics)
    w = np.zeros((n, n))
    p = np.full((n, n), np.nan)
    for edge in graph.findall("g:edge", ns):
        i = index[edge.get("source")]
        j = index[edge.get("target")]
        edata = data_of(edge)
        w[i, j] = w[j, i] = float(edata["weight"])
        if "p_value" in edata:
            p[i, j] = p[j, i] = float(edata["p_value"])
    return TopicNetwork(
        topics=tuple(topics),
        adjacency=w,
        p_values=p,
        node_prevalence=np.array(prevalence),
        window=window,
        article_count=int(gdata.get("article_count", "0")),
        degenerate=gdata.get("degenerate", "false") == "true",
    )


# -- tables ----------------------------------------------------------------

def write_vocabulary_csv(topics: Sequence[str], prevalence: Mapping[str, float],
                         path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic", "prevalence"])
        for t in topics:
            writer.writerow([t, _fmt(prevalence[t])])


def write_metrics_csv(node_metrics: Sequence[NodeMetrics], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "topic", "degree", "strength", "strength_per_edge", "clustering",
            "betweenness", "participation", "neighbor_prevalence",
        ])
        for m in node_metrics:
            writer.writerow([
                m.topic, m.degree, _fmt(m.strength), _fmt(m.strength_per_edge),
                _fmt(m.clustering), _fmt(m.betweenness), _fmt(m.participation),
                _fmt(m.neighbor_prevalence),
            ])


def read_metrics_csv(path: str | Path) -> list[NodeMetrics]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            NodeMetrics(
                topic=row["topic"],
                degree=int(row["degree"]),
                strength=float(row["strength"]),
                strength_per_edge=float(row["strength_per_edge"]),
                clustering=float(row["clustering"]),
                betweenness=float(row["betweenness"]),
                participation=float(row["participation"]),
                neighbor_prevalence=float(row["neighbor_prevalence"]),
            )
            for row in csv.DictReader(fh)
        ]


def write_global_metrics_json(gm: GlobalMetrics, path: str | Path) -> None:
    write_json(
        {
            "mean_clustering": gm.mean_clustering,
            "char_path_length": gm.char_path_length,
            "density": gm.density,
            "excluded_pairs": gm.excluded_pairs,
        },
        path,
    )


def write_partition_csv(topics: Sequence[str], partition: Partition,
                        path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic", "community_label"])
        for topic, label in zip(topics, partition.labels):
            writer.writerow([topic, label])


def read_partition_csv(path: str | Path) -> dict[str, int]:
    with open(path, newline="", encoding="utf-8") as fh:
        return {row["topic"]: int(row["community_label"]) for row in csv.DictReader(fh)}


def write_agreement_csv(topics: Sequence[str], agreement: AgreementMatrix,
                        path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic"] + list(topics))
        for i, topic in enumerate(topics):
            writer.writerow(
                [topic] + [_fmt(x) for x in agreement.co_assignment[i]]
            )


def write_series_csv(
    topics: Sequence[str],
    windows: Sequence[WindowSpec],
    series: Mapping[str, np.ndarray],
    path: str | Path,
) -> None:
    """Long format: (topic, metric, central_month, value); missing -> empty."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic", "metric", "central_month", "value"])
        for metric in METRICS:
            matrix = series[metric]
            for i, topic in enumerate(topics):
                for t, win in enumerate(windows):
                    v = matrix[i, t]
                    writer.writerow(
                        [topic, metric, win.central_month,
                         _fmt(v) if np.isfinite(v) else ""]
                    )


def write_slopes_csv(
    slopes: Mapping[str, Mapping[str, MetricSeries]], path: str | Path
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic", "metric", "static_value", "beta", "delta"])
        for metric in METRICS:
            for topic in sorted(slopes[metric]):
                s = slopes[metric][topic]
                writer.writerow([
                    topic, metric,
                    _fmt(s.static_value) if np.isfinite(s.static_value) else "",
                    _fmt(s.beta) if np.isfinite(s.beta) else "",
                    _fmt(s.delta) if np.isfinite(s.delta) else "",
                ])


def write_omega_csv(neighbor_trend: Mapping[str, float], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic", "neighbor_trend"])
        for topic in sorted(neighbor_trend):
            v = neighbor_trend[topic]
            writer.writerow([topic, _fmt(v) if np.isfinite(v) else ""])


def regression_payload(result: RegressionResult) -> dict:
    return {
        "coefficients": [
            {
                "name": name,
                "estimate": float(result.coefficients[i]),
                "std_error": float(result.std_errors[i]),
                "t": float(result.t_statistics[i]),
                "p": float(result.p_values[i]),
            }
            for i, name in enumerate(result.names)
        ],
        "df": result.df,
        "r_squared": result.r_squared,
        "n_obs": result.n_obs,
        "n_dropped": result.n_dropped,
    }


def write_analysis_json(
    static_result: RegressionResult,
    temporal_result: RegressionResult,
    battery: list[dict],
    path: str | Path,
    notes: Sequence[str] = (),
) -> None:
    write_json(
        {
            "static_regression": regression_payload(static_result),
            "temporal_regression": regression_payload(temporal_result),
            "correlations": battery,
            "notes": list(notes),
        },
        path,
    )


def read_graph_json(path: str | Path) -> TopicNetwork:
    """Rebuild a network from the JSON graph export."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    start, end = payload["window"].split("..")
    topics = [node["topic"] for node in payload["nodes"]]
    index = {t: i for i, t in enumerate(topics)}
    n = len(topics)
    prevalence = np.array(
        [float("nan") if node["prevalence"] is None else node["prevalence"]
         for node in payload["nodes"]]
    )
    w = np.zeros((n, n))
    p = np.full((n, n), np.nan)
    for edge in payload["edges"]:
        i, j = index[edge["source"]], index[edge["target"]]
        w[i, j] = w[j, i] = edge["weight"]
        if edge.get("p_value") is not None:
            p[i, j] = p[j, i] = edge["p_value"]
    return TopicNetwork(
        topics=tuple(topics),
        adjacency=w,
        p_values=p,
        node_prevalence=prevalence,
        window=MonthRange(month_index(start), month_index(end)),
        article_count=int(payload["article_count"]),
    )


# -- combined graph export --------------------------------------------------

def export_graph(
    net: TopicNetwork,
    partition: Partition | None,
    node_metrics: Sequence[NodeMetrics] | None,
    fmt: str,
    path: str | Path,
) -> None:
    """Write the annotated graph as graphml, json or csv (edge list)."""
    if fmt == "graphml":
        write_graphml(net, path, partition, node_metrics)
    elif fmt == "json":
        metrics_by_topic = (
            {m.topic: m for m in node_metrics} if node_metrics is not None else {}
        )
        nodes = []
        for i, topic in enumerate(net.topics):
            node: dict = {"topic": topic, "prevalence": float(net.node_prevalence[i])}
            if partition is not None:
                node["community"] = partition.labels[i]
            if topic in metrics_by_topic:
                m = metrics_by_topic[topic]
                node.update(
                    degree=m.degree,
                    strength=m.strength,
                    strength_per_edge=m.strength_per_edge,
                    clustering=m.clustering,
                    betweenness=m.betweenness,
                    participation=m.participation,
                    neighbor_prevalence=m.neighbor_prevalence,
                )
            nodes.append(node)
        edges = [
            {
                "source": net.topics[i],
                "target": net.topics[j],
                "weight": w,
                "p_value": float(net.p_values[i, j]),
            }
            for i, j, w in net.edges()
        ]
        write_json(
            {
                "window": net.window.label(),
                "article_count": net.article_count,
                "nodes": nodes,
                "edges": edges,
            },
            path,
        )
    elif fmt == "csv":
        write_edge_csv(net, path)
    else:
        raise ConfigError(
            f"unknown export format {fmt!r}; supported: graphml, json, csv"
        )
