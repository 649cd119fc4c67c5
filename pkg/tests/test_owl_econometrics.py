"""OLS, information criteria, best-subset step models and regression tables."""

from math import comb

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from bananas import ConfigSlip, DataSlip, NumericSlip
from owl_econometrics import OwlEconometrics, RegressionSpec, term_label
from rabbit_corpus import CATEGORIES, CONTROLS, PERIODS


def _rows(seed, n_apps=300, n_months=1, beta_niche=-0.3, interaction=0.0, noise=0.3):
    """Analysis rows with a known linear outcome; log_reviews carries most of the signal."""
    rng = np.random.default_rng(seed)
    apps = pd.DataFrame({
        "app_id": [f"app{i:04d}" for i in range(n_apps)],
        "niche": rng.uniform(0, 1, n_apps),
        "category": rng.choice(CATEGORIES, n_apps),
        "market_leader": rng.uniform(size=n_apps) < 0.3,
        "days_since_launch": rng.uniform(100, 3000, n_apps),
        "size_mb": rng.uniform(5, 200, n_apps),
        "adult": (rng.uniform(size=n_apps) < 0.1).astype(float),
    })
    frames = []
    for month in range(n_months):
        frame = apps.copy()
        frame["month"] = month
        frame["period"] = PERIODS[min(month, len(PERIODS) - 1)]
        frame["log_reviews"] = rng.normal(size=n_apps)
        frame["rating"] = rng.uniform(1, 5, n_apps)
        effect = beta_niche + (interaction if month > 0 else 0.0)
        frame["log_price"] = (
            1.0 + effect * frame["niche"] + 0.8 * frame["log_reviews"] + rng.normal(0, noise, n_apps)
        )
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def _line(seed=0, n=50):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    return pd.DataFrame({"const": 1.0, "x": x}), x


class TestOls:

    def test_exact_fit(self):
        X, x = _line()
        fit = OwlEconometrics.ols_fit(X, 2.0 * x)
        np.testing.assert_allclose(fit.coefficients, [0.0, 2.0], atol=1e-10)
        assert fit.rss == pytest.approx(0.0, abs=1e-18)
        assert fit.terms == ("const", "x")
        assert fit.k_params == 3

    def test_constant_outcome(self):
        X, _ = _line()
        fit = OwlEconometrics.ols_fit(X, np.full(50, 3.0))
        np.testing.assert_allclose(fit.coefficients, [3.0, 0.0], atol=1e-10)
        assert fit.r_squared == 0.0

    def test_matches_normal_equations(self):
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            n, p = int(rng.integers(10, 80)), int(rng.integers(1, 6))
            X = np.column_stack([np.ones(n), rng.normal(size=(n, p))])
            y = rng.normal(size=n)
            fit = OwlEconometrics.ols_fit(X, y)
            beta = np.linalg.solve(X.T @ X, X.T @ y)
            np.testing.assert_allclose(fit.coefficients.to_numpy(), beta, rtol=1e-8, atol=1e-10)
            sigma2 = fit.rss / (n - p - 1)
            se = np.sqrt(np.diag(sigma2 * np.linalg.inv(X.T @ X)))
            np.testing.assert_allclose(fit.std_errors.to_numpy(), se, rtol=1e-8)

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(4)
        X = np.column_stack([np.ones(100), rng.normal(size=(100, 3))])
        fit = OwlEconometrics.ols_fit(X, rng.normal(size=100))
        np.testing.assert_allclose(X.T @ fit.residuals, 0.0, atol=1e-9)

    def test_column_scaling(self):
        rng = np.random.default_rng(5)
        X = pd.DataFrame({"const": 1.0, "x": rng.normal(size=60)})
        y = rng.normal(size=60) + X["x"]
        plain = OwlEconometrics.ols_fit(X, y)
        scaled = OwlEconometrics.ols_fit(X.assign(x=X["x"] * 10.0), y)
        assert scaled.coefficients["x"] == pytest.approx(plain.coefficients["x"] / 10.0)
        assert scaled.t_values["x"] == pytest.approx(plain.t_values["x"])
        assert scaled.rss == pytest.approx(plain.rss)

    def test_intercept_only_r_squared(self):
        rng = np.random.default_rng(6)
        fit = OwlEconometrics.ols_fit(pd.DataFrame({"const": np.ones(30)}), rng.normal(size=30))
        assert fit.r_squared == 0.0

    def test_collinear(self):
        X, x = _line()
        X["twice"] = 2.0 * x
        with pytest.raises(NumericSlip) as caught:
            OwlEconometrics.ols_fit(X, x)
        assert set(caught.value.context["collinear"]) & {"x", "twice"}

    def test_too_few_rows(self):
        with pytest.raises(NumericSlip):
            OwlEconometrics.ols_fit(np.eye(2), np.ones(2))

    def test_missing_values(self):
        X, x = _line()
        y = x.copy()
        y[3] = np.nan
        with pytest.raises(DataSlip):
            OwlEconometrics.ols_fit(X, y)


class TestStandardErrors:

    def test_duplicated_rows(self):
        rng = np.random.default_rng(7)
        X = np.column_stack([np.ones(40), rng.normal(size=40)])
        y = rng.normal(size=40)
        once = OwlEconometrics.ols_fit(X, y)
        twice = OwlEconometrics.ols_fit(np.vstack([X, X]), np.concatenate([y, y]))
        np.testing.assert_allclose(twice.coefficients, once.coefficients, rtol=1e-10)
        ratio = twice.std_errors / once.std_errors
        np.testing.assert_allclose(ratio, np.sqrt((40 - 2) / (80 - 2)), rtol=1e-10)

    def test_singleton_clusters_match_hc1(self):
        rng = np.random.default_rng(8)
        X = np.column_stack([np.ones(70), rng.normal(size=(70, 2))])
        y = rng.normal(size=70) * (1 + np.abs(X[:, 1]))
        hc1 = OwlEconometrics.ols_fit(X, y, "hc1")
        clustered = OwlEconometrics.ols_fit(X, y, "cluster", clusters=range(70))
        np.testing.assert_allclose(clustered.std_errors, hc1.std_errors, rtol=1e-10)

    def test_one_cluster(self):
        X, x = _line()
        with pytest.raises(NumericSlip):
            OwlEconometrics.ols_fit(X, x + np.sin(x), "cluster", clusters=["same"] * 50)

    def test_unknown_mode(self):
        X, x = _line()
        with pytest.raises(ConfigSlip):
            OwlEconometrics.ols_fit(X, x, "bootstrap")


class TestInformationCriteria:

    def test_unit_loglik(self):
        assert OwlEconometrics.gaussian_loglik(1.0, 1) == pytest.approx(-1.418939, abs=1e-6)

    def test_loglik_scale_shift(self):
        base = OwlEconometrics.gaussian_loglik(7.0, 20)
        assert OwlEconometrics.gaussian_loglik(7.0 * 9.0, 20) == pytest.approx(base - 20 * np.log(3.0))

    def test_negative_rss(self):
        with pytest.raises(ConfigSlip):
            OwlEconometrics.gaussian_loglik(-1.0, 5)

    def test_criteria(self):
        assert OwlEconometrics.aic_value(-10.0, 3) == 26.0
        for n in (5, 50, 500):
            gap = OwlEconometrics.bic_value(-10.0, 4, n) - OwlEconometrics.aic_value(-10.0, 4)
            assert gap == pytest.approx((np.log(n) - 2.0) * 4)

    def test_fit_criteria_consistent(self):
        X, x = _line()
        fit = OwlEconometrics.ols_fit(X, x + np.cos(3 * x))
        assert fit.aic == pytest.approx(OwlEconometrics.aic(fit))
        assert fit.bic == pytest.approx(OwlEconometrics.bic(fit))


class TestDesigns:

    def test_period_interactions(self):
        rows = _rows(0, n_apps=20, n_months=5)
        block = OwlEconometrics.build_interactions(rows, "period")
        assert list(block.columns) == [
            "after_1", "after_1_x_niche", "after_2", "after_2_x_niche",
            "after_3", "after_3_x_niche", "after_4", "after_4_x_niche",
        ]
        hit = rows["period"] == "after_2"
        np.testing.assert_allclose(block.loc[hit, "after_2_x_niche"], rows.loc[hit, "niche"])
        assert (block.loc[~hit, "after_2_x_niche"] == 0).all()

    def test_category_and_leader_interactions(self):
        rows = _rows(1, n_apps=40)
        category = OwlEconometrics.build_interactions(rows, "category")
        assert "lifestyle" not in category.columns
        assert "medical_x_niche" in category.columns
        leader = OwlEconometrics.build_interactions(rows, "ml")
        assert list(leader.columns) == ["ml", "ml_x_niche"]

    def test_unknown_scheme(self):
        with pytest.raises(ConfigSlip):
            OwlEconometrics.build_interactions(_rows(2, n_apps=10), "weekday")

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            RegressionSpec(outcome="log_price", base_terms=("niche",))
        with pytest.raises(ValidationError):
            RegressionSpec(outcome="log_price", controls=("downloads",))

    def test_market_leader_sample(self):
        rows = _rows(3)
        spec = RegressionSpec(outcome="log_price", sample_filter="market_leader")
        fit = OwlEconometrics.fit_spec(rows, spec)
        assert fit.n == int(rows["market_leader"].sum())

    def test_single_month_pooled_equals_cross_section(self):
        rows = _rows(4)
        spec = RegressionSpec(outcome="log_price", controls=("log_reviews",))
        cross = OwlEconometrics.fit_spec(rows, spec)
        pooled = OwlEconometrics.pooled_ols(rows, spec)
        pd.testing.assert_series_equal(pooled.coefficients, cross.coefficients, rtol=1e-10)

    def test_pooled_zero_interactions_rarely_significant(self):
        quiet = 0
        total = 0
        for seed in range(40):
            rows = _rows(100 + seed, n_apps=80, n_months=5)
            spec = RegressionSpec(outcome="log_price", controls=("log_reviews",), interactions=("period",))
            fit = OwlEconometrics.pooled_ols(rows, spec)
            for period in PERIODS[1:]:
                total += 1
                quiet += fit.p_values[f"{period}_x_niche"] >= 0.01
        assert quiet / total >= 0.9


class TestStepModels:

    @pytest.fixture(scope="class")
    def rows(self):
        return _rows(11)

    @pytest.fixture(scope="class")
    def spec(self):
        return RegressionSpec(outcome="log_price")

    @pytest.mark.parametrize("step", range(len(CONTROLS) + 1))
    def test_subset_counts(self, rows, spec, step):
        result = OwlEconometrics.best_subset_step(rows, spec, step)
        assert len(result.scores) == comb(len(CONTROLS), step)
        assert result.scores["best"].sum() == 1
        assert len(result.controls) == step
        assert result.fit.aic == result.scores["aic"].min()

    def test_extreme_steps(self, rows, spec):
        assert OwlEconometrics.best_subset_step(rows, spec, 0).scores["controls"].tolist() == ["(none)"]
        assert OwlEconometrics.best_subset_step(rows, spec, 5).controls == CONTROLS

    def test_first_step_finds_strongest_control(self, rows, spec):
        assert OwlEconometrics.best_subset_step(rows, spec, 1).controls == ("log_reviews",)

    def test_step_out_of_range(self, rows, spec):
        with pytest.raises(ConfigSlip):
            OwlEconometrics.best_subset_step(rows, spec, 6)

    def test_ladder_rss_nonincreasing(self, rows, spec):
        ladder = OwlEconometrics.step_ladder(rows, spec)
        rss = [step.fit.rss for step in ladder]
        assert [step.step for step in ladder] == list(range(6))
        assert all(b <= a * (1 + 1e-12) for a, b in zip(rss, rss[1:]))
        assert len({step.fit.n for step in ladder}) == 1

    def test_workers_do_not_change_scores(self, rows, spec):
        serial = OwlEconometrics.best_subset_step(rows, spec, 2, workers=1)
        threaded = OwlEconometrics.best_subset_step(rows, spec, 2, workers=4)
        pd.testing.assert_frame_equal(serial.scores, threaded.scores)
        assert serial.controls == threaded.controls

    def test_select_step_model(self):
        table = pd.DataFrame({
            "step": range(6),
            "aic": [100, 90, 80, 70, 60, 65],
            "bic": [100, 92, 84, 76, 75, 80],
        })
        choice = OwlEconometrics.select_step_model(table)
        assert (choice.step, choice.aic_step, choice.bic_step) == (4, 4, 4)
        assert choice.bic_agrees

        near_tie = table.assign(aic=[100, 90, 80, 61, 60, 65], bic=[100, 92, 70, 76, 75, 80])
        choice = OwlEconometrics.select_step_model(near_tie)
        assert (choice.step, choice.aic_step, choice.bic_step) == (3, 4, 2)
        assert not choice.bic_agrees

    def test_single_step(self):
        choice = OwlEconometrics.select_step_model(pd.DataFrame({"step": [0], "aic": [5.0], "bic": [6.0]}))
        assert choice.step == 0

    def test_nothing_to_select(self):
        with pytest.raises(ConfigSlip):
            OwlEconometrics.select_step_model(pd.DataFrame(columns=["step", "aic", "bic"]))


class TestTables:

    def test_number_formatting(self):
        fmt = OwlEconometrics.format_number
        assert fmt(-0.334) + OwlEconometrics.stars(0.001) == "-0.33***"
        assert f"({fmt(0.031)})" == "(0.03)"
        assert fmt(-0.001) == "0.0"
        assert fmt(float("nan")) == ""

    @pytest.mark.parametrize("p_value, marks", [(0.5, ""), (0.07, "*"), (0.03, "**"), (0.001, "***")])
    def test_stars(self, p_value, marks):
        assert OwlEconometrics.stars(p_value) == marks

    def test_term_labels(self):
        assert term_label("game_x_niche") == "Game x Niche"
        assert term_label("log_reviews") == "logReviews"
        assert term_label("const") == "Intercept"

    def test_table_layout(self):
        rows = _rows(12)
        fits = {
            "(1)": OwlEconometrics.fit_spec(rows, RegressionSpec(outcome="log_price")),
            "(2)": OwlEconometrics.fit_spec(rows, RegressionSpec(outcome="log_price", controls=("log_reviews",))),
        }
        table = OwlEconometrics.regression_table(fits, terms=["const", "niche", "log_reviews"])
        assert list(table.columns) == ["term", "(1)", "(2)"]
        assert table["term"].tolist() == [
            "Intercept", "", "Niche", "", "logReviews", "", "N", "R2", "AIC", "BIC",
        ]
        assert table.loc[4, "(1)"] == "" and table.loc[4, "(2)"] != ""
        assert table.loc[5, "(2)"].startswith("(")
        assert table.loc[6, "(1)"] == "300"

        markdown = OwlEconometrics.to_markdown(table)
        assert markdown.splitlines()[0] == "| term | (1) | (2) |"
        assert markdown.splitlines()[1] == "|---|---|---|"
