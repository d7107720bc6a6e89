"""Spearman correlations and OLS regression with t-statistics.

Includes the two topic-prevalence models: log static prevalence against
structural measures, and the prevalence slope against the neighbor-trend
measure plus structural slopes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import rankdata, t as t_dist

from .errors import DataError
from .metrics import NodeMetrics

STATIC_PREDICTORS = (
    "betweenness",
    "degree",
    "strength_per_edge",
    "clustering",
    "participation",
    "neighbor_prevalence",
)

SLOPE_PREDICTORS = (
    "betweenness",
    "degree",
    "strength_per_edge",
    "clustering",
    "participation",
)


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p_value: float
    n_obs: int


@dataclass(frozen=True)
class RegressionResult:
    """Least-squares fit summary; the intercept is the first row."""

    names: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_statistics: np.ndarray
    p_values: np.ndarray
    df: int
    r_squared: float
    n_obs: int
    n_dropped: int


def spearman(
    x: Sequence[float], y: Sequence[float], exact: bool = False
) -> CorrelationResult:
    """Spearman rank correlation with average ranks for ties.

    p-values use the t approximation; ``exact=True`` (n <= 10 after
    pairwise deletion) enumerates all permutations instead.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise DataError("inputs must be 1-d and the same length")
    ok = np.isfinite(xa) & np.isfinite(ya)
    xa, ya = xa[ok], ya[ok]
    n = xa.size
    if n < 4:
        raise DataError(f"need at least 4 complete pairs, got {n}")
    rx = rankdata(xa)
    ry = rankdata(ya)
    if np.all(rx == rx[0]) or np.all(ry == ry[0]):
        raise DataError("constant input after ranking: correlation undefined")
    rho = float(np.corrcoef(rx, ry)[0, 1])
    # attainable rank correlations are spaced at least ~6/(n^3 - n) apart,
    # so snapping float noise at the |rho| = 1 boundary is lossless
    rho = max(-1.0, min(1.0, rho))
    if 1.0 - abs(rho) < 1e-12:
        rho = float(np.sign(rho))
    if exact:
        if n > 10:
            raise DataError("exact permutation p-value is limited to n <= 10")
        p = _exact_permutation_p(rx, ry, abs(rho))
    elif abs(rho) >= 1.0:
        p = 0.0
    else:
        t = rho * np.sqrt((n - 2) / (1.0 - rho * rho))
        p = float(2.0 * t_dist.sf(abs(t), n - 2))
    return CorrelationResult(rho=rho, p_value=p, n_obs=n)


def _exact_permutation_p(rx: np.ndarray, ry: np.ndarray, abs_rho: float) -> float:
    rxc = rx - rx.mean()
    denom = np.sqrt((rxc**2).sum())
    count = total = 0
    for perm in itertools.permutations(ry):
        pyc = np.asarray(perm) - ry.mean()
        r = float((rxc * pyc).sum() / (denom * np.sqrt((pyc**2).sum())))
        if abs(r) >= abs_rho - 1e-12:
            count += 1
        total += 1
    return count / total


def ols_regression(
    response: Sequence[float], predictors: Mapping[str, Sequence[float]]
) -> RegressionResult:
    """OLS with intercept; per-coefficient t statistics and two-sided p.

    Rows with any missing value are dropped (count reported). A
    rank-deficient design raises DataError naming the collinear columns.
    """
    names = tuple(predictors.keys())
    y = np.asarray(response, dtype=float)
    cols = [np.asarray(predictors[name], dtype=float) for name in names]
    if any(c.shape != y.shape for c in cols):
        raise DataError("predictor columns must match the response length")
    ok = np.isfinite(y)
    for c in cols:
        ok &= np.isfinite(c)
    n_dropped = int((~ok).sum())
    y = y[ok]
    x = np.column_stack([np.ones(ok.sum())] + [c[ok] for c in cols])
    n, p_plus_1 = x.shape
    if n <= p_plus_1:
        raise DataError(
            f"need more than {p_plus_1} complete observations, got {n}"
        )
    rank = np.linalg.matrix_rank(x)
    if rank < p_plus_1:
        raise DataError(
            "rank-deficient design; collinear columns: "
            + ", ".join(_collinear_columns(x, names))
        )
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ coef
    df = n - p_plus_1
    sigma2 = float(resid @ resid) / df
    cov = sigma2 * np.linalg.inv(x.T @ x)
    se = np.sqrt(np.diag(cov))
    t_stats = coef / se
    p_values = 2.0 * t_dist.sf(np.abs(t_stats), df)
    tss = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 - float(resid @ resid) / tss if tss > 0 else float("nan")
    return RegressionResult(
        names=("intercept",) + names,
        coefficients=coef,
        std_errors=se,
        t_statistics=t_stats,
        p_values=p_values,
        df=df,
        r_squared=r_squared,
        n_obs=n,
        n_dropped=n_dropped,
    )


def _collinear_columns(x: np.ndarray, names: tuple[str, ...]) -> list[str]:
    """Columns (beyond the intercept) lying in the span of the others."""
    bad = []
    for j in range(1, x.shape[1]):
        others = np.delete(x, j, axis=1)
        fitted = others @ np.linalg.lstsq(others, x[:, j], rcond=None)[0]
        scale = max(float(np.abs(x[:, j]).max()), 1.0)
        if np.allclose(fitted, x[:, j], atol=1e-8 * scale):
            bad.append(names[j - 1])
    return bad or ["<unidentified>"]


def analysis_static(
    node_metrics: Sequence[NodeMetrics], prevalence: Mapping[str, float]
) -> RegressionResult:
    """Regress log topic prevalence on the six structural measures."""
    for m in node_metrics:
        if prevalence[m.topic] <= 0:
            raise DataError(
                f"topic {m.topic!r} has prevalence {prevalence[m.topic]}; "
                "log prevalence is undefined"
            )
    response = [float(np.log(prevalence[m.topic])) for m in node_metrics]
    columns = {
        name: [float(getattr(m, name)) for m in node_metrics]
        for name in STATIC_PREDICTORS
    }
    return ols_regression(response, columns)


def analysis_temporal(
    slopes: Mapping[str, Mapping[str, object]], neighbor_trend: Mapping[str, float]
) -> RegressionResult:
    """Regress the prevalence slope on the neighbor trend and metric slopes.

    ``slopes`` is the metric -> topic -> MetricSeries table (exclusions
    already applied when it was built).
    """
    topics = sorted(slopes["prevalence"].keys())
    response = [slopes["prevalence"][t].delta for t in topics]
    columns = {"neighbor_trend": [neighbor_trend.get(t, float("nan")) for t in topics]}
    for metric in SLOPE_PREDICTORS:
        columns[f"{metric}_slope"] = [slopes[metric][t].delta for t in topics]
    return ols_regression(response, columns)


_STATIC_PAIRS = (
    ("betweenness", "degree"),
    ("betweenness", "strength"),
    ("betweenness", "strength_per_edge"),
    ("clustering", "participation"),
)

_SLOPE_PAIRS = (
    ("betweenness", "degree"),
    ("betweenness", "strength"),
    ("clustering", "participation"),
)


def correlation_battery(
    node_metrics: Sequence[NodeMetrics],
    slopes: Mapping[str, Mapping[str, object]] | None = None,
) -> list[dict]:
    """Pairwise Spearman checks among structural measures (and their slopes)."""
    results = []
    values = {
        "betweenness": [m.betweenness for m in node_metrics],
        "degree": [float(m.degree) for m in node_metrics],
        "strength": [m.strength for m in node_metrics],
        "strength_per_edge": [m.strength_per_edge for m in node_metrics],
        "clustering": [m.clustering for m in node_metrics],
        "participation": [m.participation for m in node_metrics],
    }
    for a, b in _STATIC_PAIRS:
        r = spearman(values[a], values[b])
        results.append(
            {"x": a, "y": b, "rho": r.rho, "p_value": r.p_value, "n_obs": r.n_obs}
        )
    if slopes is not None:
        topics = sorted(slopes["prevalence"].keys())
        for a, b in _SLOPE_PAIRS:
            r = spearman(
                [slopes[a][t].delta for t in topics],
                [slopes[b][t].delta for t in topics],
            )
            results.append(
                {
                    "x": f"{a}_slope",
                    "y": f"{b}_slope",
                    "rho": r.rho,
                    "p_value": r.p_value,
                    "n_obs": r.n_obs,
                }
            )
    return results
