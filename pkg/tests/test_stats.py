import numpy as np
import pytest
from scipy.stats import spearmanr as scipy_spearman

from oracles import ols_normal_equations
from topiknet.errors import DataError
from topiknet.metrics import NodeMetrics
from topiknet.stats import (analysis_static, analysis_temporal,
                            correlation_battery, ols_regression, spearman)
from topiknet.dynamics import MetricSeries


class TestSpearman:
    def test_monotone_increasing(self):
        r = spearman([1, 2, 3, 4, 5], [10, 20, 30, 40, 50])
        assert r.rho == 1.0 and r.p_value == 0.0

    def test_reversed(self):
        r = spearman([1, 2, 3, 4, 5], [5, 4, 3, 2, 1])
        assert r.rho == -1.0

    def test_tied_data_average_ranks(self):
        # hand computation: x ranks (1, 2.5, 2.5, 4, 5, 6), y ranks
        # (2, 1, 3, 4, 5.5, 5.5); Pearson of those ranks:
        x = [1.0, 2.0, 2.0, 3.0, 4.0, 5.0]
        y = [1.5, 1.0, 2.0, 3.0, 9.0, 9.0]
        rx = np.array([1, 2.5, 2.5, 4, 5, 6])
        ry = np.array([2, 1, 3, 4, 5.5, 5.5])
        expected = np.corrcoef(rx, ry)[0, 1]
        r = spearman(x, y)
        assert r.rho == pytest.approx(expected, abs=1e-12)
        assert r.n_obs == 6

    def test_matches_scipy(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = rng.normal(size=30)
            y = 0.5 * x + rng.normal(size=30)
            mine = spearman(x, y)
            ref = scipy_spearman(x, y)
            assert mine.rho == pytest.approx(ref.statistic, abs=1e-12)
            assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-6)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=25)
        y = rng.normal(size=25)
        base = spearman(x, y).rho
        assert spearman(np.exp(x), y).rho == pytest.approx(base, abs=1e-12)
        assert spearman(x, y**3).rho == pytest.approx(base, abs=1e-12)

    def test_self_correlation(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=10)
        assert spearman(x, x).rho == 1.0

    def test_pairwise_deletion(self):
        x = [1, 2, np.nan, 4, 5, 6]
        y = [2, 4, 5, np.nan, 10, 12]
        r = spearman(x, y)
        assert r.n_obs == 4 and r.rho == 1.0

    def test_constant_errors(self):
        with pytest.raises(DataError, match="constant"):
            spearman([1, 1, 1, 1], [1, 2, 3, 4])

    def test_too_short_errors(self):
        with pytest.raises(DataError, match="at least 4"):
            spearman([1, 2, 3], [1, 2, 3])

    def test_exact_permutation_small_n(self):
        x = [1, 2, 3, 4, 5, 6]
        y = [2, 1, 4, 3, 6, 5]
        exact = spearman(x, y, exact=True)
        # p = fraction of the 720 permutations at least as extreme
        assert 0.0 < exact.p_value <= 1.0
        count = round(exact.p_value * 720)
        assert count / 720 == pytest.approx(exact.p_value)

    def test_exact_limited_to_ten(self):
        with pytest.raises(DataError, match="n <= 10"):
            spearman(list(range(12)), list(range(12)), exact=True)


class TestOLS:
    def test_exact_fit(self):
        x = np.arange(10.0)
        y = 2.0 * x + 1.0
        res = ols_regression(y, {"x": x})
        assert res.coefficients[0] == pytest.approx(1.0, abs=1e-10)
        assert res.coefficients[1] == pytest.approx(2.0, abs=1e-10)
        assert res.r_squared == pytest.approx(1.0)
        assert res.df == 8

    def test_matches_normal_equations(self):
        rng = np.random.default_rng(3)
        n = 40
        x1 = rng.normal(size=n)
        x2 = rng.normal(size=n)
        y = 1.0 + 0.5 * x1 - 2.0 * x2 + rng.normal(size=n)
        res = ols_regression(y, {"x1": x1, "x2": x2})
        coef, se, t, df = ols_normal_equations(y, [x1, x2])
        assert np.allclose(res.coefficients, coef, atol=1e-10)
        assert np.allclose(res.std_errors, se, atol=1e-10)
        assert np.allclose(res.t_statistics, t, atol=1e-10)
        assert res.df == df

    def test_residuals_orthogonal_to_predictors(self):
        rng = np.random.default_rng(4)
        n = 60
        cols = {f"x{j}": rng.normal(size=n) for j in range(4)}
        y = rng.normal(size=n)
        res = ols_regression(y, cols)
        x = np.column_stack([np.ones(n)] + list(cols.values()))
        resid = y - x @ res.coefficients
        for j, col in enumerate(cols.values()):
            rel = abs(resid @ col) / (np.linalg.norm(resid) * np.linalg.norm(col))
            assert rel < 1e-8

    def test_t_invariant_to_predictor_scaling(self):
        rng = np.random.default_rng(5)
        n = 50
        x1 = rng.normal(size=n)
        x2 = rng.normal(size=n)
        y = 0.3 * x1 + x2 + rng.normal(size=n)
        a = ols_regression(y, {"x1": x1, "x2": x2})
        b = ols_regression(y, {"x1": 100.0 * x1, "x2": x2 / 7.0})
        assert np.allclose(a.t_statistics[1:], b.t_statistics[1:], atol=1e-9)

    def test_paper_shaped_degrees_of_freedom(self):
        rng = np.random.default_rng(6)
        y = rng.normal(size=100)
        cols = {f"x{j}": rng.normal(size=100) for j in range(6)}
        assert ols_regression(y, cols).df == 93
        y99 = rng.normal(size=99)
        cols99 = {f"x{j}": rng.normal(size=99) for j in range(6)}
        assert ols_regression(y99, cols99).df == 92

    def test_rank_deficiency_names_column(self):
        rng = np.random.default_rng(7)
        x1 = rng.normal(size=30)
        with pytest.raises(DataError, match="dup"):
            ols_regression(rng.normal(size=30), {"x1": x1, "dup": 2.0 * x1})

    def test_constant_column_is_collinear_with_intercept(self):
        rng = np.random.default_rng(8)
        with pytest.raises(DataError, match="flat"):
            ols_regression(
                rng.normal(size=30),
                {"x": rng.normal(size=30), "flat": np.full(30, 3.3)},
            )

    def test_listwise_deletion_counts(self):
        rng = np.random.default_rng(9)
        n = 30
        x = rng.normal(size=n)
        y = x + rng.normal(size=n)
        x[3] = np.nan
        y[7] = np.nan
        res = ols_regression(y, {"x": x})
        assert res.n_obs == 28 and res.n_dropped == 2

    def test_too_few_observations(self):
        with pytest.raises(DataError, match="observations"):
            ols_regression([1.0, 2.0], {"x": [1.0, 2.0]})


def synthetic_metrics(rng, n=100):
    """NodeMetrics rows with independent structural columns."""
    rows = []
    for i in range(n):
        rows.append(
            NodeMetrics(
                topic=f"t{i:03d}",
                degree=int(rng.integers(2, 30)),
                strength=float(rng.uniform(0.5, 6.0)),
                strength_per_edge=float(rng.uniform(0.05, 0.6)),
                clustering=float(rng.uniform(0.0, 1.0)),
                betweenness=float(rng.uniform(0.0, 0.2)),
                participation=float(rng.uniform(0.0, 0.8)),
                neighbor_prevalence=float(rng.uniform(0.05, 0.5)),
            )
        )
    return rows


class TestAnalysisStatic:
    def test_planted_coefficients_recovered(self):
        rng = np.random.default_rng(10)
        rows = synthetic_metrics(rng)
        planted = {
            "betweenness": 4.0,
            "degree": 0.05,
            "strength_per_edge": 2.0,
            "clustering": -1.0,
            "participation": 0.8,
            "neighbor_prevalence": 1.5,
        }
        log_prev = (
            -2.0
            + sum(
                planted[name] * np.array([getattr(m, name) for m in rows])
                for name in planted
            )
            + rng.normal(0, 0.1, len(rows))
        )
        prevalence = {m.topic: float(np.exp(lp)) for m, lp in zip(rows, log_prev)}
        res = analysis_static(rows, prevalence)
        assert res.df == 93
        for name, value in planted.items():
            j = res.names.index(name)
            assert abs(res.coefficients[j] - value) <= 2.0 * res.std_errors[j]

    def test_zero_prevalence_errors_before_log(self):
        rng = np.random.default_rng(11)
        rows = synthetic_metrics(rng, n=20)
        prevalence = {m.topic: 0.2 for m in rows}
        prevalence[rows[3].topic] = 0.0
        with pytest.raises(DataError, match="log prevalence"):
            analysis_static(rows, prevalence)

    def test_constant_predictor_named(self):
        rng = np.random.default_rng(12)
        rows = [
            NodeMetrics(
                topic=f"t{i}",
                degree=int(rng.integers(2, 20)),
                strength=1.0,
                strength_per_edge=0.25,  # constant: collinear with intercept
                clustering=float(rng.uniform(0, 1)),
                betweenness=float(rng.uniform(0, 0.2)),
                participation=float(rng.uniform(0, 0.8)),
                neighbor_prevalence=float(rng.uniform(0.1, 0.4)),
            )
            for i in range(30)
        ]
        with pytest.raises(DataError, match="strength_per_edge"):
            analysis_static(rows, {m.topic: 0.1 for m in rows})


def slope_series(topic, metric, delta):
    return MetricSeries(
        topic=topic, metric=metric, values=np.zeros(3),
        static_value=1.0, beta=delta, delta=delta,
    )


def build_slopes(rng, topics, prevalence_delta):
    slopes = {m: {} for m in (
        "prevalence", "degree", "strength", "strength_per_edge",
        "clustering", "betweenness", "participation",
    )}
    for i, t in enumerate(topics):
        slopes["prevalence"][t] = slope_series(t, "prevalence", prevalence_delta[i])
        for metric in ("degree", "strength", "strength_per_edge",
                       "clustering", "betweenness", "participation"):
            slopes[metric][t] = slope_series(t, metric, float(rng.normal(0, 0.01)))
    return slopes


class TestAnalysisTemporal:
    def test_planted_neighbor_trend_recovered(self):
        rng = np.random.default_rng(13)
        topics = [f"t{i:03d}" for i in range(99)]
        omega = {t: float(rng.normal(0, 0.02)) for t in topics}
        noise = rng.normal(0, 0.002, 99)
        prevalence_delta = np.array([1.5 * omega[t] for t in topics]) + noise
        slopes = build_slopes(rng, topics, prevalence_delta)
        res = analysis_temporal(slopes, omega)
        assert res.df == 92
        j = res.names.index("neighbor_trend")
        assert abs(res.coefficients[j] - 1.5) <= 2.0 * res.std_errors[j]

    def test_all_zero_slopes_rank_deficient(self):
        rng = np.random.default_rng(14)
        topics = [f"t{i}" for i in range(30)]
        slopes = build_slopes(rng, topics, rng.normal(0, 0.01, 30))
        for t in topics:
            slopes["degree"][t] = slope_series(t, "degree", 0.0)
        omega = {t: float(rng.normal(0, 0.02)) for t in topics}
        with pytest.raises(DataError, match="degree_slope"):
            analysis_temporal(slopes, omega)


class TestCorrelationBattery:
    def test_static_and_slope_pairs_present(self):
        rng = np.random.default_rng(15)
        rows = synthetic_metrics(rng, n=40)
        topics = [m.topic for m in rows]
        slopes = build_slopes(rng, topics, rng.normal(0, 0.01, 40))
        battery = correlation_battery(rows, slopes)
        keys = {(b["x"], b["y"]) for b in battery}
        assert ("betweenness", "degree") in keys
        assert ("clustering", "participation") in keys
        assert ("betweenness_slope", "degree_slope") in keys
        for b in battery:
            assert -1.0 <= b["rho"] <= 1.0
            assert 0.0 <= b["p_value"] <= 1.0
