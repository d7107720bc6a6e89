"""Weighted topic co-occurrence networks.

Edges are phi coefficients between per-article binary occurrence vectors,
kept only when positive and significant under the chi-squared test
(chi2 = n * phi^2, df=1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import chi2

from .corpus import ArticleRecord, TopicVocabulary, in_window, match_topics
from .errors import DataError
from .months import MonthRange


@dataclass(frozen=True)
class TopicNetwork:
    """Symmetric weighted adjacency over a fixed topic list.

    ``p_values`` mirrors the adjacency: the chi-squared p for each retained
    edge, NaN elsewhere. ``constant_topics`` lists nodes whose occurrence
    vector was constant in the window (kept as isolated nodes).
    """

    topics: tuple[str, ...]
    adjacency: np.ndarray
    p_values: np.ndarray
    node_prevalence: np.ndarray
    window: MonthRange
    article_count: int
    constant_topics: tuple[str, ...] = ()
    degenerate: bool = False

    def __post_init__(self):
        n = len(self.topics)
        w = np.asarray(self.adjacency, dtype=float)
        if w.shape != (n, n):
            raise DataError(f"adjacency shape {w.shape} does not match {n} topics")
        if not np.allclose(w, w.T, atol=0.0):
            raise DataError("adjacency is not symmetric")
        if np.any(np.diag(w) != 0.0):
            raise DataError("adjacency has nonzero diagonal")
        if np.any(w < 0.0):
            raise DataError("adjacency has negative weights")
        w.flags.writeable = False
        object.__setattr__(self, "adjacency", w)
        p = np.asarray(self.p_values, dtype=float)
        p.flags.writeable = False
        object.__setattr__(self, "p_values", p)
        prev = np.asarray(self.node_prevalence, dtype=float)
        prev.flags.writeable = False
        object.__setattr__(self, "node_prevalence", prev)

    @property
    def n_nodes(self) -> int:
        return len(self.topics)

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency)))

    def edges(self) -> list[tuple[int, int, float]]:
        """Upper-triangle edge list as (i, j, weight), i < j."""
        ii, jj = np.nonzero(np.triu(self.adjacency))
        return [(int(i), int(j), float(self.adjacency[i, j])) for i, j in zip(ii, jj)]

    def index_of(self, topic: str) -> int:
        return self.topics.index(topic)


def phi_coefficient(x: Sequence[int] | np.ndarray, y: Sequence[int] | np.ndarray) -> float:
    """Phi coefficient of two binary vectors from their 2x2 contingency table.

    Equals the Pearson correlation of the vectors. Raises DataError for
    constant input (a zero marginal makes the coefficient undefined).
    """
    xa = np.asarray(x, dtype=bool)
    ya = np.asarray(y, dtype=bool)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise DataError("occurrence vectors must be 1-d and the same length")
    if xa.size < 2:
        raise DataError("need at least two observations")
    n11 = int(np.sum(xa & ya))
    n10 = int(np.sum(xa & ~ya))
    n01 = int(np.sum(~xa & ya))
    n00 = int(np.sum(~xa & ~ya))
    return _phi_from_counts(n11, n10, n01, n00)


def _phi_from_counts(n11: int, n10: int, n01: int, n00: int) -> float:
    r1 = n11 + n10
    r0 = n01 + n00
    c1 = n11 + n01
    c0 = n10 + n00
    if min(r1, r0, c1, c0) == 0:
        raise DataError("constant occurrence vector: phi is undefined")
    return (n11 * n00 - n10 * n01) / np.sqrt(float(r1) * r0 * c1 * c0)


def phi_significance(phi: float, n_articles: int) -> float:
    """Two-sided p-value for phi via chi2 = n * phi^2 with one degree of freedom."""
    if n_articles < 2:
        raise DataError("need at least two articles for a significance test")
    return float(chi2.sf(n_articles * phi * phi, 1))


def _phi_matrix(occ: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pairwise phi and p-values for the columns of a binary matrix.

    Returns (phi, p, constant) where ``constant`` flags columns with zero
    variance; phi/p rows and columns for those are NaN.
    """
    occ = occ.astype(float)
    n, k = occ.shape
    counts = occ.sum(axis=0)
    constant = (counts == 0) | (counts == n)
    n11 = occ.T @ occ
    n10 = counts[:, None] - n11
    n01 = counts[None, :] - n11
    n00 = n - n11 - n10 - n01
    r1 = counts[:, None]
    r0 = n - r1
    c1 = counts[None, :]
    c0 = n - c1
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = (n11 * n00 - n10 * n01) / np.sqrt(r1 * r0 * c1 * c0)
    phi[constant, :] = np.nan
    phi[:, constant] = np.nan
    np.fill_diagonal(phi, np.nan)
    with np.errstate(invalid="ignore"):
        p = chi2.sf(n * phi * phi, 1)
    return phi, p, constant


def build_network(
    records: Sequence[ArticleRecord],
    vocabulary: TopicVocabulary,
    window: MonthRange,
    alpha: float = 0.05,
    bonferroni: bool = False,
) -> TopicNetwork:
    """Build the thresholded co-occurrence network for one time window.

    An edge is retained iff phi > 0 and its p-value beats ``alpha``
    (divided by the number of pairs when ``bonferroni`` is set). Topics
    with constant in-window occurrence stay as isolated, flagged nodes.
    """
    sub = in_window(records, window)
    if len(sub) < 2:
        raise DataError(
            f"window {window.label()} has {len(sub)} article(s); need at least 2"
        )
    occ = match_topics(sub, vocabulary.topics)
    return _network_from_occurrence(occ, vocabulary.topics, window, alpha, bonferroni)


def _network_from_occurrence(
    occ: np.ndarray,
    topics: tuple[str, ...],
    window: MonthRange,
    alpha: float,
    bonferroni: bool,
) -> TopicNetwork:
    n_articles, k = occ.shape
    phi, p, constant = _phi_matrix(occ)
    threshold = alpha / (k * (k - 1) / 2) if bonferroni else alpha
    with np.errstate(invalid="ignore"):
        keep = (phi > 0.0) & (p < threshold)
    weights = np.where(keep, phi, 0.0)
    p_kept = np.where(keep, p, np.nan)
    prevalence = occ.sum(axis=0) / n_articles
    return TopicNetwork(
        topics=tuple(topics),
        adjacency=weights,
        p_values=p_kept,
        node_prevalence=prevalence,
        window=window,
        article_count=n_articles,
        constant_topics=tuple(t for t, c in zip(topics, constant) if c),
    )


def degenerate_network(
    topics: tuple[str, ...], window: MonthRange, article_count: int = 0
) -> TopicNetwork:
    """Placeholder network for a window with too few articles."""
    n = len(topics)
    return TopicNetwork(
        topics=tuple(topics),
        adjacency=np.zeros((n, n)),
        p_values=np.full((n, n), np.nan),
        node_prevalence=np.full(n, np.nan),
        window=window,
        article_count=article_count,
        constant_topics=tuple(topics),
        degenerate=True,
    )


def replace_adjacency(net: TopicNetwork, adjacency: np.ndarray) -> TopicNetwork:
    """New network with the same metadata but different edge weights."""
    return TopicNetwork(
        topics=net.topics,
        adjacency=np.array(adjacency, dtype=float),
        p_values=np.full_like(net.p_values, np.nan),
        node_prevalence=net.node_prevalence,
        window=net.window,
        article_count=net.article_count,
        constant_topics=net.constant_topics,
        degenerate=net.degenerate,
    )
