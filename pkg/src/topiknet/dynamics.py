"""Sliding-window network sequences and standardized temporal slopes.

Windows are symmetric month spans around a central month; the topic set is
fixed from the full period, so every window network shares the same nodes.
Slopes are ordinary least squares against months-since-first-window,
standardized by each topic's full-period value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import ArticleRecord, TopicVocabulary, match_topics
from .errors import DataError
from .metrics import betweenness, clustering_barrat, degree_strength, participation
from .months import MonthRange, month_index, month_label
from .network import TopicNetwork, _network_from_occurrence, degenerate_network
from ._parallel import map_indexed

logger = logging.getLogger(__name__)

METRICS = (
    "prevalence",
    "degree",
    "strength",
    "strength_per_edge",
    "clustering",
    "betweenness",
    "participation",
)


@dataclass(frozen=True)
class WindowSpec:
    """A central month and the inclusive span ±half_width around it."""

    central_month: str
    half_width: int
    range: MonthRange


def enumerate_windows(corpus_range: MonthRange, half_width: int = 6) -> list[WindowSpec]:
    """One window per central month whose full span fits the corpus range."""
    if half_width < 0:
        raise DataError("half_width must be non-negative")
    if len(corpus_range) < 2 * half_width + 1:
        raise DataError(
            f"corpus range {corpus_range.label()} is shorter than one "
            f"±{half_width}-month window"
        )
    return [
        WindowSpec(
            central_month=month_label(c),
            half_width=half_width,
            range=MonthRange(c - half_width, c + half_width),
        )
        for c in range(corpus_range.start + half_width, corpus_range.end - half_width + 1)
    ]


def window_networks(
    records: Sequence[ArticleRecord],
    vocabulary: TopicVocabulary,
    windows: Sequence[WindowSpec],
    alpha: float = 0.05,
    bonferroni: bool = False,
    threads: int = 1,
) -> list[TopicNetwork]:
    """One network per window over the fixed vocabulary.

    Windows with fewer than two articles yield degenerate placeholder
    networks (metrics for them are reported missing).
    """
    occ = match_topics(records, vocabulary.topics)
    months = np.array([rec.month for rec in records])

    def build(i: int) -> TopicNetwork:
        win = windows[i]
        mask = (months >= win.range.start) & (months <= win.range.end)
        if mask.sum() < 2:
            return degenerate_network(vocabulary.topics, win.range, int(mask.sum()))
        return _network_from_occurrence(
            occ[mask], vocabulary.topics, win.range, alpha, bonferroni
        )

    return map_indexed(build, len(windows), threads)


def window_metric_series(
    nets: Sequence[TopicNetwork], labels: Sequence[int]
) -> dict[str, np.ndarray]:
    """Per-topic metric trajectories: metric name -> (topics, windows) array.

    Participation uses the supplied static partition for every window.
    Degenerate windows contribute NaN columns; strength-per-edge is NaN
    where the degree is zero.
    """
    n_topics = nets[0].n_nodes
    series = {m: np.full((n_topics, len(nets)), np.nan) for m in METRICS}
    for t, net in enumerate(nets):
        if net.degenerate:
            continue
        k, s = degree_strength(net)
        series["degree"][:, t] = k
        series["strength"][:, t] = s
        with np.errstate(invalid="ignore", divide="ignore"):
            series["strength_per_edge"][:, t] = np.where(k > 0, s / k, np.nan)
        series["clustering"][:, t] = clustering_barrat(net)
        series["betweenness"][:, t] = betweenness(net)
        series["participation"][:, t] = participation(net, labels)
        series["prevalence"][:, t] = net.node_prevalence
    return series


@dataclass(frozen=True)
class MetricSeries:
    """One topic's trajectory for one metric, with its standardized slope."""

    topic: str
    metric: str
    values: np.ndarray
    static_value: float
    beta: float
    delta: float


def metric_slope(
    values: Sequence[float], static_value: float, month_index: Sequence[float]
) -> tuple[float, float]:
    """OLS slope of a windowed series and its standardized version.

    Returns (beta, delta) with delta = beta / static_value. Missing values
    are dropped from the fit; fewer than three points or a zero/missing
    static value make the result missing (NaN).
    """
    y = np.asarray(values, dtype=float)
    t = np.asarray(month_index, dtype=float)
    if y.shape != t.shape:
        raise DataError("series and month index lengths differ")
    ok = np.isfinite(y)
    if ok.sum() < 3:
        return float("nan"), float("nan")
    yy, tt = y[ok], t[ok]
    tc = tt - tt.mean()
    beta = float((tc * (yy - yy.mean())).sum() / (tc * tc).sum())
    if static_value == 0 or not np.isfinite(static_value):
        return beta, float("nan")
    return beta, float(beta / static_value)


def slopes_table(
    series: Mapping[str, np.ndarray],
    static_values: Mapping[str, np.ndarray],
    windows: Sequence[WindowSpec],
    topics: Sequence[str],
    exclusion: Sequence[str] = (),
) -> dict[str, dict[str, MetricSeries]]:
    """Standardized slopes for every metric and non-excluded topic."""
    centrals = np.array([month_index(w.central_month) for w in windows], dtype=float)
    t = centrals - centrals[0]
    excluded = set(exclusion)
    out: dict[str, dict[str, MetricSeries]] = {}
    for metric, matrix in series.items():
        static = static_values[metric]
        per_topic: dict[str, MetricSeries] = {}
        for i, topic in enumerate(topics):
            if topic in excluded:
                continue
            beta, delta = metric_slope(matrix[i], float(static[i]), t)
            per_topic[topic] = MetricSeries(
                topic=topic,
                metric=metric,
                values=matrix[i],
                static_value=float(static[i]),
                beta=beta,
                delta=delta,
            )
        out[metric] = per_topic
    return out


def neighbor_trend(
    net: TopicNetwork, prevalence_slopes: Mapping[str, float]
) -> dict[str, float]:
    """Strength-weighted mean of neighbors' prevalence slopes per topic.

    Neighbors lacking a (finite) slope are dropped and the weights
    renormalized; topics with no usable neighbors get NaN.
    """
    w = net.adjacency
    out: dict[str, float] = {}
    dropped = 0
    for i, topic in enumerate(net.topics):
        nbrs = np.nonzero(w[i])[0]
        if nbrs.size == 0:
            out[topic] = float("nan")
            continue
        acc = norm = 0.0
        for j in nbrs:
            slope = prevalence_slopes.get(net.topics[j], float("nan"))
            if np.isfinite(slope):
                acc += w[i, j] * slope
                norm += w[i, j]
            else:
                dropped += 1
        out[topic] = acc / norm if norm > 0 else float("nan")
    if dropped:
        logger.info("neighbor_trend: dropped %d neighbor term(s) lacking slopes", dropped)
    return out
