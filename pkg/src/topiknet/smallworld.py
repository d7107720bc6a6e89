"""Small-world propensity: null ensembles, lattice references, deviations.

Null networks preserve the binary degree sequence exactly (Maslov-Sneppen
double-edge swaps) and approximate the strength sequence by placing the
original weight multiset, largest first, on the free edge slot whose
endpoints have the largest product of residual target strengths.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .metrics import _clustering_from_matrix, _distances_from_matrix, char_path_length
from .network import TopicNetwork, replace_adjacency
from ._parallel import map_indexed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NullEnsemble:
    networks: tuple[TopicNetwork, ...]
    seed: int
    method: str
    swaps_completed: tuple[int, ...]


@dataclass(frozen=True)
class SmallWorldResult:
    swp: float
    delta_c: float
    delta_l: float
    c_observed: float
    c_lattice: float
    c_random: float
    l_observed: float
    l_lattice: float
    l_random: float


def _rewire_edges(
    edges: np.ndarray, rng: np.random.Generator, swap_target: int, attempt_limit: int
) -> tuple[np.ndarray, int]:
    """Degree-preserving double-edge swaps on an (m, 2) edge array."""
    edges = edges.copy()
    existing = {(min(u, v), max(u, v)) for u, v in edges}
    m = len(edges)
    swaps = attempts = 0
    while swaps < swap_target and attempts < attempt_limit:
        attempts += 1
        e1, e2 = rng.integers(0, m, size=2)
        if e1 == e2:
            continue
        a, b = edges[e1]
        c, d = edges[e2]
        if rng.integers(0, 2):
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        n1 = (min(a, d), max(a, d))
        n2 = (min(c, b), max(c, b))
        if n1 in existing or n2 in existing:
            continue
        existing.discard((min(a, b), max(a, b)))
        existing.discard((min(c, d), max(c, d)))
        existing.add(n1)
        existing.add(n2)
        edges[e1] = n1
        edges[e2] = n2
        swaps += 1
    if swaps < swap_target:
        logger.warning(
            "edge rewiring stopped at %d/%d swaps after %d attempts",
            swaps, swap_target, attempts,
        )
    return edges, swaps


def _assign_weights(
    edges: np.ndarray, weights: np.ndarray, target_strength: np.ndarray, n: int
) -> np.ndarray:
    """Place weights (descending) on slots by residual strength product."""
    residual = target_strength.astype(float).copy()
    u, v = edges[:, 0], edges[:, 1]
    alive = np.ones(len(edges), dtype=bool)
    w = np.zeros((n, n))
    for weight in np.sort(weights)[::-1]:
        score = np.where(alive, residual[u] * residual[v], -np.inf)
        slot = int(np.argmax(score))
        alive[slot] = False
        i, j = int(u[slot]), int(v[slot])
        w[i, j] = w[j, i] = weight
        residual[i] -= weight
        residual[j] -= weight
    return w


def randomize_preserving(
    net: TopicNetwork,
    count: int,
    seed: int,
    swap_factor: int = 10,
    attempt_factor: int = 100,
    threads: int = 1,
) -> NullEnsemble:
    """Ensemble of degree- and (approximately) strength-preserving nulls.

    Null index ``idx`` uses the derived seed (seed, idx), so results are
    reproducible and independent of the worker count.
    """
    edge_list = net.edges()
    if len(edge_list) < 2:
        raise DataError("need at least two edges to randomize")
    edges = np.array([(i, j) for i, j, _ in edge_list], dtype=int)
    weights = np.array([w for _, _, w in edge_list])
    strength = net.adjacency.sum(axis=1)
    m = len(edges)

    def build(idx: int) -> tuple[TopicNetwork, int]:
        rng = np.random.default_rng((seed, idx))
        rewired, swaps = _rewire_edges(edges, rng, swap_factor * m, attempt_factor * m)
        w = _assign_weights(rewired, weights, strength, net.n_nodes)
        return replace_adjacency(net, w), swaps

    results = map_indexed(build, count, threads)
    return NullEnsemble(
        networks=tuple(r[0] for r in results),
        seed=seed,
        method="double_edge_swap+rank_weight_assignment",
        swaps_completed=tuple(r[1] for r in results),
    )


def _ring_slots(n: int) -> list[tuple[int, int]]:
    """All node pairs ordered by circular distance (then position)."""
    slots = []
    for dist in range(1, n // 2 + 1):
        limit = n if 2 * dist != n else n // 2
        for i in range(limit):
            j = (i + dist) % n
            slots.append((min(i, j), max(i, j)))
    return slots


def lattice_reference(net: TopicNetwork) -> TopicNetwork:
    """Ring lattice with the same size, edge count and weight multiset.

    Edges fill the smallest circular distances first; larger weights go to
    shorter-distance slots.
    """
    edge_list = net.edges()
    n = net.n_nodes
    weights = np.sort(np.array([w for _, _, w in edge_list]))[::-1]
    w = np.zeros((n, n))
    for (i, j), weight in zip(_ring_slots(n), weights):
        w[i, j] = w[j, i] = weight
    return replace_adjacency(net, w)


def empirical_pvalue(observed: float, ensemble_values, direction: str) -> float:
    """Add-one empirical p-value against an ensemble of null values."""
    values = np.asarray(list(ensemble_values), dtype=float)
    if values.size == 0:
        raise DataError("empty null ensemble")
    if direction == "greater":
        extreme = int(np.sum(values >= observed))
    elif direction == "less":
        extreme = int(np.sum(values <= observed))
    else:
        raise DataError(f"unknown direction {direction!r}; use 'greater' or 'less'")
    return (1 + extreme) / (1 + values.size)


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _propensity(c_obs, l_obs, c_latt, c_rand, l_latt, l_rand) -> tuple[float, float, float]:
    if c_latt == c_rand or l_latt == l_rand:
        raise DataError(
            "degenerate references: lattice and random values coincide "
            f"(C {c_latt} vs {c_rand}; L {l_latt} vs {l_rand})"
        )
    delta_c = _clamp01((c_latt - c_obs) / (c_latt - c_rand))
    delta_l = _clamp01((l_obs - l_rand) / (l_latt - l_rand))
    swp = 1.0 - np.sqrt((delta_c**2 + delta_l**2) / 2.0)
    return float(swp), delta_c, delta_l


def _network_c_l(w: np.ndarray) -> tuple[float, float]:
    c = float(_clustering_from_matrix(w).mean())
    length = char_path_length(_distances_from_matrix(w)).value
    return c, length


def small_world_propensity(net: TopicNetwork, ensemble: NullEnsemble) -> SmallWorldResult:
    """Propensity score comparing the network to lattice and random references."""
    if ensemble.networks[0].n_nodes != net.n_nodes:
        raise DataError("ensemble was not built from this network")
    c_obs, l_obs = _network_c_l(net.adjacency)
    c_latt, l_latt = _network_c_l(lattice_reference(net).adjacency)
    null_c_l = [_network_c_l(g.adjacency) for g in ensemble.networks]
    c_rand = float(np.mean([c for c, _ in null_c_l]))
    l_rand = float(np.mean([length for _, length in null_c_l]))
    swp, delta_c, delta_l = _propensity(c_obs, l_obs, c_latt, c_rand, l_latt, l_rand)
    return SmallWorldResult(
        swp=swp,
        delta_c=delta_c,
        delta_l=delta_l,
        c_observed=c_obs,
        c_lattice=c_latt,
        c_random=c_rand,
        l_observed=l_obs,
        l_lattice=l_latt,
        l_random=l_rand,
    )


def small_world_summary(net: TopicNetwork, ensemble: NullEnsemble) -> dict:
    """JSON-ready report: references, deviations, propensity and p-values.

    The propensity p-value scores each null by plugging its own clustering
    and path length into the shared lattice/random references.
    """
    result = small_world_propensity(net, ensemble)
    null_c_l = [_network_c_l(g.adjacency) for g in ensemble.networks]
    null_swp = [
        _propensity(c, length, result.c_lattice, result.c_random,
                    result.l_lattice, result.l_random)[0]
        for c, length in null_c_l
    ]
    return {
        "swp": result.swp,
        "delta_c": result.delta_c,
        "delta_l": result.delta_l,
        "c_observed": result.c_observed,
        "c_lattice": result.c_lattice,
        "c_random": result.c_random,
        "l_observed": result.l_observed,
        "l_lattice": result.l_lattice,
        "l_random": result.l_random,
        "p_clustering": empirical_pvalue(result.c_observed, [c for c, _ in null_c_l], "greater"),
        "p_path_length": empirical_pvalue(result.l_observed, [l for _, l in null_c_l], "greater"),
        "p_swp": empirical_pvalue(result.swp, null_swp, "greater"),
        "ensemble_seed": ensemble.seed,
        "ensemble_size": len(ensemble.networks),
        "method": ensemble.method,
    }
