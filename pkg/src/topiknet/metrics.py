"""Node-level and global measures for weighted undirected networks.

Distances use the inverse-weight transform d = 1/w throughout, the usual
convention for association-strength weights.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import count
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DataError
from .network import TopicNetwork


def degree_strength(net: TopicNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Per-node degree (edge count) and strength (incident weight sum)."""
    w = net.adjacency
    degree = np.count_nonzero(w, axis=1)
    strength = w.sum(axis=1)
    return degree, strength


def clustering_barrat(net: TopicNetwork) -> np.ndarray:
    """Barrat weighted clustering coefficient.

    c_i = 1/(s_i (k_i - 1)) * sum over ordered neighbor pairs (h, j) of
    (w_ij + w_ih)/2 over closed triangles; 0 when the degree is below 2.
    """
    return _clustering_from_matrix(net.adjacency)


def _clustering_from_matrix(w: np.ndarray) -> np.ndarray:
    a = (w > 0).astype(float)
    degree = a.sum(axis=1)
    strength = w.sum(axis=1)
    # sum_j w_ij * (A^2)_ij equals the ordered-pair triangle sum above
    numer = (w * (a @ a)).sum(axis=1)
    denom = strength * (degree - 1)
    c = np.zeros(w.shape[0])
    ok = degree >= 2
    c[ok] = numer[ok] / denom[ok]
    return c


def shortest_distances(net: TopicNetwork) -> np.ndarray:
    """All-pairs shortest path lengths under d = 1/w (inf if unreachable)."""
    return _distances_from_matrix(net.adjacency)


def _distances_from_matrix(w: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        lengths = np.where(w > 0, 1.0 / w, 0.0)
    return dijkstra(csr_matrix(lengths), directed=False)


@dataclass(frozen=True)
class PathLength:
    """Characteristic path length plus the unreachable ordered pairs dropped."""

    value: float
    excluded_pairs: int


def char_path_length(distances: np.ndarray) -> PathLength:
    """Mean shortest distance over ordered pairs i != j, skipping unreachable ones."""
    n = distances.shape[0]
    if n < 2:
        raise DataError("need at least two nodes for a path length")
    off = ~np.eye(n, dtype=bool)
    vals = distances[off]
    finite = np.isfinite(vals)
    if not finite.any():
        raise DataError("all node pairs are unreachable")
    return PathLength(float(vals[finite].mean()), int((~finite).sum()))


def betweenness(net: TopicNetwork) -> np.ndarray:
    """Betweenness centrality, normalized over ordered pairs ((n-1)(n-2)).

    Brandes' accumulation with Dijkstra under d = 1/w; shortest-path
    multiplicities are counted exactly.
    """
    n = net.n_nodes
    if n < 3:
        raise DataError("betweenness needs at least three nodes")
    return _betweenness_from_matrix(net.adjacency) / ((n - 1) * (n - 2))


def _betweenness_from_matrix(w: np.ndarray) -> np.ndarray:
    n = w.shape[0]
    neighbors: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i, j in zip(*np.nonzero(w)):
        neighbors[i].append((int(j), 1.0 / w[i, j]))
    bc = np.zeros(n)
    tie = count()
    for s in range(n):
        S: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist_final: dict[int, float] = {}
        seen = {s: 0.0}
        q: list[tuple[float, int, int, int]] = [(0.0, next(tie), -1, s)]
        while q:
            d, _, pred, v = heapq.heappop(q)
            if v in dist_final:
                continue
            if pred >= 0:
                sigma[v] += sigma[pred]
            dist_final[v] = d
            S.append(v)
            for u, duv in neighbors[v]:
                du = d + duv
                if u not in dist_final and (u not in seen or du < seen[u]):
                    seen[u] = du
                    heapq.heappush(q, (du, next(tie), v, u))
                    sigma[u] = 0.0
                    preds[u] = [v]
                elif u not in dist_final and du == seen[u]:
                    sigma[u] += sigma[v]
                    preds[u].append(v)
        delta = np.zeros(n)
        while S:
            v = S.pop()
            coeff = (1.0 + delta[v]) / sigma[v]
            for p in preds[v]:
                delta[p] += sigma[p] * coeff
            if v != s:
                bc[v] += delta[v]
    return bc


def participation(net: TopicNetwork, labels: Sequence[int]) -> np.ndarray:
    """Participation coefficient of each node's strength across communities."""
    return _participation_from_matrix(net.adjacency, np.asarray(labels))


def _participation_from_matrix(w: np.ndarray, labels: np.ndarray) -> np.ndarray:
    if labels.shape[0] != w.shape[0]:
        raise DataError("partition does not cover all nodes")
    strength = w.sum(axis=1)
    frac_sq = np.zeros(w.shape[0])
    ok = strength > 0
    for m in np.unique(labels):
        sm = w[:, labels == m].sum(axis=1)
        frac_sq[ok] += (sm[ok] / strength[ok]) ** 2
    p = np.zeros(w.shape[0])
    p[ok] = 1.0 - frac_sq[ok]
    return p


def neighbor_prevalence(net: TopicNetwork) -> np.ndarray:
    """Strength-weighted mean prevalence of each node's neighbors.

    NaN for isolated nodes (no neighbors to average).
    """
    w = net.adjacency
    strength = w.sum(axis=1)
    xi = np.full(net.n_nodes, np.nan)
    ok = strength > 0
    xi[ok] = (w @ net.node_prevalence)[ok] / strength[ok]
    return xi


@dataclass(frozen=True)
class NodeMetrics:
    topic: str
    degree: int
    strength: float
    strength_per_edge: float
    clustering: float
    betweenness: float
    participation: float
    neighbor_prevalence: float


@dataclass(frozen=True)
class GlobalMetrics:
    mean_clustering: float
    char_path_length: float
    density: float
    excluded_pairs: int


def compute_node_metrics(net: TopicNetwork, labels: Sequence[int]) -> list[NodeMetrics]:
    """Full per-topic metric table for one network and partition."""
    k, s = degree_strength(net)
    c = clustering_barrat(net)
    b = betweenness(net)
    p = participation(net, labels)
    xi = neighbor_prevalence(net)
    with np.errstate(invalid="ignore", divide="ignore"):
        spe = np.where(k > 0, s / k, np.nan)
    return [
        NodeMetrics(
            topic=t,
            degree=int(k[i]),
            strength=float(s[i]),
            strength_per_edge=float(spe[i]),
            clustering=float(c[i]),
            betweenness=float(b[i]),
            participation=float(p[i]),
            neighbor_prevalence=float(xi[i]),
        )
        for i, t in enumerate(net.topics)
    ]


def global_metrics(net: TopicNetwork) -> GlobalMetrics:
    """Network-level clustering, characteristic path length and density."""
    c = clustering_barrat(net)
    pl = char_path_length(shortest_distances(net))
    n = net.n_nodes
    return GlobalMetrics(
        mean_clustering=float(c.mean()),
        char_path_length=pl.value,
        density=net.n_edges / (n * (n - 1) / 2),
        excluded_pairs=pl.excluded_pairs,
    )
