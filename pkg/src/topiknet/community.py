"""Weighted modularity and Louvain-style community detection with consensus.

The optimizer sweeps nodes in seeded random order, moving each to the
neighboring community with the best modularity gain, then aggregates
communities into super-nodes and repeats. Many seeded restarts feed an
agreement matrix whose re-clustering yields the consensus partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DataError
from .network import TopicNetwork
from ._parallel import map_indexed

_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class Partition:
    """Community labels (contiguous from 0) with their modularity."""

    labels: tuple[int, ...]
    q: float
    gamma: float = 1.0

    @property
    def n_communities(self) -> int:
        return max(self.labels) + 1 if self.labels else 0


@dataclass(frozen=True)
class AgreementMatrix:
    """Fraction of restarts assigning each node pair to one community."""

    co_assignment: np.ndarray
    iteration_count: int


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel communities contiguously in order of first appearance."""
    mapping: dict[int, int] = {}
    out = np.empty(len(labels), dtype=int)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


def modularity(net: TopicNetwork, labels: Sequence[int], gamma: float = 1.0) -> float:
    """Weighted modularity of a partition (ordered-pair normalization)."""
    labels = np.asarray(labels)
    if labels.shape[0] != net.n_nodes:
        raise DataError("partition does not cover all nodes")
    if net.n_edges == 0:
        raise DataError("modularity is undefined on a network with no edges")
    return _modularity_matrix(net.adjacency, labels, gamma)


def _modularity_matrix(w: np.ndarray, labels: np.ndarray, gamma: float) -> float:
    # Diagonal entries, when present (aggregated graphs), hold the full
    # ordered within-community sum and are counted once in row sums.
    l_w = w.sum()
    s = w.sum(axis=1)
    q = 0.0
    for c in np.unique(labels):
        mask = labels == c
        q += w[np.ix_(mask, mask)].sum() - gamma * s[mask].sum() ** 2 / l_w
    return q / l_w


def _local_moving(w: np.ndarray, labels: np.ndarray, rng: np.random.Generator,
                  gamma: float) -> bool:
    """One full local-moving phase in place; True if anything moved."""
    n = w.shape[0]
    l_w = w.sum()
    s = w.sum(axis=1)
    comm_strength = np.zeros(n)
    np.add.at(comm_strength, labels, s)
    moved_any = False
    while True:
        moved = False
        for i in rng.permutation(n):
            a = labels[i]
            k_to = np.zeros(n)
            np.add.at(k_to, labels, w[i])
            k_to[a] -= w[i, i]
            # gain (up to the positive factor 2/l) of moving i from a to b;
            # equal gains keep the smallest community label
            base = k_to[a] - gamma * s[i] * (comm_strength[a] - s[i]) / l_w
            best_b, best_gain = a, _GAIN_EPS
            for b in np.unique(labels[w[i] > 0]):
                if b == a:
                    continue
                gain = (k_to[b] - gamma * s[i] * comm_strength[b] / l_w) - base
                if gain > best_gain:
                    best_b, best_gain = b, gain
            if best_b != a:
                labels[i] = best_b
                comm_strength[a] -= s[i]
                comm_strength[best_b] += s[i]
                moved = True
                moved_any = True
        if not moved:
            return moved_any


def _aggregate(w: np.ndarray, canon: np.ndarray) -> np.ndarray:
    """Collapse communities to super-nodes; diagonal keeps within sums."""
    k = int(canon.max()) + 1
    onehot = np.zeros((w.shape[0], k))
    onehot[np.arange(len(canon)), canon] = 1.0
    return onehot.T @ w @ onehot


def _louvain_matrix(w: np.ndarray, rng: np.random.Generator, gamma: float) -> np.ndarray:
    n = w.shape[0]
    if w.sum() == 0:
        return np.arange(n)
    mapping = np.arange(n)  # original node -> current community
    current = np.array(w, dtype=float)
    while True:
        labels = np.arange(current.shape[0])
        if not _local_moving(current, labels, rng, gamma):
            break
        canon = _canonical(labels)
        mapping = canon[mapping]
        current = _aggregate(current, canon)
    return _canonical(mapping)


def louvain_once(net: TopicNetwork, seed: int, gamma: float = 1.0) -> Partition:
    """One seeded run of the locally greedy modularity optimizer."""
    if net.n_edges == 0:
        raise DataError("cannot cluster a network with no edges")
    rng = np.random.default_rng(seed)
    labels = _louvain_matrix(net.adjacency, rng, gamma)
    return Partition(tuple(int(x) for x in labels), modularity(net, labels, gamma), gamma)


def agreement_matrix(label_sets: Sequence[np.ndarray]) -> np.ndarray:
    """Co-assignment fractions across a collection of partitions."""
    n = len(label_sets[0])
    acc = np.zeros((n, n))
    for labels in label_sets:
        labels = np.asarray(labels)
        acc += labels[:, None] == labels[None, :]
    return acc / len(label_sets)


def consensus_partition(
    net: TopicNetwork,
    iterations: int = 100,
    tau: float = 0.5,
    seed: int = 0,
    gamma: float = 1.0,
    max_meta: int = 50,
    seeds: Sequence[int] | None = None,
    threads: int = 1,
) -> tuple[Partition, AgreementMatrix]:
    """Stable partition from repeated restarts plus agreement re-clustering.

    Runs ``iterations`` seeded restarts; while they disagree, thresholds the
    agreement matrix at ``tau`` and re-clusters it with the same procedure.
    Returns the stable partition (modularity evaluated on the original
    network) and the first agreement matrix. Raises ConvergenceError
    carrying the last agreement matrix after ``max_meta`` rounds.
    """
    if iterations < 2:
        raise DataError("consensus needs at least two iterations")
    if net.n_edges == 0:
        raise DataError("cannot cluster a network with no edges")
    if seeds is not None:
        seed_list = list(seeds)
        if len(seed_list) != iterations:
            raise DataError("explicit seed list must match the iteration count")
    else:
        seed_list = [(seed, i) for i in range(iterations)]

    def run_all(matrix: np.ndarray, round_no: int) -> list[np.ndarray]:
        def one(i: int) -> np.ndarray:
            entropy = seed_list[i] if round_no == 0 else (seed, round_no, i)
            return _louvain_matrix(matrix, np.random.default_rng(entropy), gamma)

        return map_indexed(one, iterations, threads)

    partitions = run_all(net.adjacency, 0)
    first_agreement = agreement_matrix(partitions)
    agreement = first_agreement
    round_no = 0
    while True:
        canon = [_canonical(p) for p in partitions]
        if all(np.array_equal(canon[0], c) for c in canon[1:]):
            labels = canon[0]
            part = Partition(
                tuple(int(x) for x in labels),
                modularity(net, labels, gamma),
                gamma,
            )
            return part, AgreementMatrix(first_agreement, iterations)
        round_no += 1
        if round_no > max_meta:
            raise ConvergenceError(
                f"consensus did not stabilize within {max_meta} rounds",
                agreement=agreement,
            )
        agreement = agreement_matrix(partitions)
        thresholded = np.where(agreement >= tau, agreement, 0.0)
        np.fill_diagonal(thresholded, 0.0)
        partitions = run_all(thresholded, round_no)
