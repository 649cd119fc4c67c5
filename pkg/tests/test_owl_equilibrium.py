"""Pricing games: asymmetric-loyalty duopoly and circular location demand."""

import numpy as np
import pytest
from pydantic import ValidationError

from bananas import ConfigSlip
from owl_equilibrium import BorensteinParams, OwlEquilibrium, SZParams, SZPrices


# ------------------------------------------------------------------------------
# Loyalty duopoly
# ------------------------------------------------------------------------------

class TestLoyaltyPrimitives:

    def test_cdf(self):
        cdf = OwlEquilibrium.sz_loyalty_cdf
        assert cdf(-1.0, 1.0) == 0.0
        assert cdf(0.5, 2.0) == 0.25
        assert cdf(3.0, 1.0) == 1.0
        with pytest.raises(ConfigSlip):
            cdf(0.5, 0.0)

    def test_switch_decision(self):
        level = SZPrices.uniform(1.0, 1.0)
        assert OwlEquilibrium.sz_switch_decision(level, 0.0, "alpha") == "stay"
        pricey = SZPrices(p_A=2.0, p_tilde_A=2.0, p_B=1.0, p_tilde_B=1.0)
        assert OwlEquilibrium.sz_switch_decision(pricey, 0.5, "alpha") == "switch"
        assert OwlEquilibrium.sz_switch_decision(pricey, 0.5, "beta") == "stay"
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.sz_switch_decision(level, 0.1, "gamma")

    def test_params_validated(self):
        with pytest.raises(ValidationError):
            SZParams(theta=0.3)
        with pytest.raises(ValidationError):
            SZParams(l_alpha=0.0)


class TestUniformPrices:

    def test_symmetric_market(self):
        params = SZParams(theta=0.5, l_alpha=1.0)
        prices, profits = OwlEquilibrium.sz_benchmark_equilibrium(params)
        assert (prices.p_A, prices.p_B) == pytest.approx((1.0, 1.0))
        assert prices.is_uniform
        assert profits == pytest.approx((0.5, 0.5))
        assert OwlEquilibrium.sz_verify_nash(params, prices).certified

    @pytest.mark.parametrize("theta", [0.5, 0.6, 0.7, 0.85])
    def test_closed_form_profits_match_demand(self, theta):
        params = SZParams(theta=theta, l_alpha=1.5, l_beta=1.5, c=0.2)
        prices, profits = OwlEquilibrium.sz_benchmark_equilibrium(params)
        assert OwlEquilibrium.sz_profits(params, prices) == pytest.approx(profits, rel=1e-9)
        # margins over c times retained plus captured volume
        margin_A, margin_B = prices.p_A - params.c, prices.p_B - params.c
        switch = (prices.p_A - prices.p_B) / params.l_alpha
        volume_A = theta * (1.0 - switch)
        volume_B = (1.0 - theta) + theta * switch
        assert margin_A * volume_A == pytest.approx(profits[0])
        assert margin_B * volume_B == pytest.approx(profits[1])

    def test_larger_firm_prices_higher(self):
        prices, _ = OwlEquilibrium.sz_benchmark_equilibrium(SZParams(theta=0.8))
        assert prices.p_A > prices.p_B

    def test_perturbed_prices_not_certified(self):
        params = SZParams(theta=0.5, l_alpha=1.0)
        report = OwlEquilibrium.sz_verify_nash(params, SZPrices.uniform(1.1, 1.1))
        assert not report.certified
        assert report.max_gain["A"] > 0
        assert report.to_dict()["certified"] is False

    def test_needs_uniform_mode(self):
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.sz_benchmark_equilibrium(SZParams(discrimination=True))

    def test_bad_deviation_grid(self):
        params = SZParams()
        prices, _ = OwlEquilibrium.sz_benchmark_equilibrium(params)
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.sz_verify_nash(params, prices, grid_step=0.0)

    @pytest.mark.parametrize("l_alpha, c", [(1.0, 0.0), (1.5, 0.25), (4.0, 2.0)])
    def test_fully_loyal_market(self, l_alpha, c):
        prices, _ = OwlEquilibrium.sz_benchmark_equilibrium(SZParams(theta=1.0, l_alpha=l_alpha, c=c))
        assert prices.p_A == pytest.approx(2.0 / 3.0 * l_alpha + c, abs=1e-12)
        assert prices.p_B == pytest.approx(1.0 / 3.0 * l_alpha + c, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.5, 0.6, 0.75, 0.9, 1.0])
    @pytest.mark.parametrize("l_alpha", [1.0, 2.0])
    @pytest.mark.parametrize("c", [0.0, 0.5])
    def test_certified_across_grid(self, theta, l_alpha, c):
        params = SZParams(theta=theta, l_alpha=l_alpha, l_beta=l_alpha, c=c)
        prices, _ = OwlEquilibrium.sz_benchmark_equilibrium(params)
        report = OwlEquilibrium.sz_verify_nash(params, prices)
        assert report.mode == "benchmark"
        assert report.certified, report.max_gain


class TestGroupPrices:

    def test_equal_loyalty(self):
        params = SZParams(l_alpha=3.0, l_beta=3.0, discrimination=True)
        prices, profits = OwlEquilibrium.sz_equilibrium(params)
        assert (prices.p_A, prices.p_tilde_A) == pytest.approx((2.0, 1.0))
        assert (prices.p_B, prices.p_tilde_B) == pytest.approx((1.0, 2.0))
        assert OwlEquilibrium.sz_profits(params, prices) == pytest.approx(profits)
        report = OwlEquilibrium.sz_verify_nash(params, prices)
        assert report.mode == "discrimination" and report.certified

    def test_prices_ignore_theta(self):
        low, _ = OwlEquilibrium.sz_discrimination_equilibrium(SZParams(theta=0.5, discrimination=True))
        high, _ = OwlEquilibrium.sz_discrimination_equilibrium(SZParams(theta=0.95, discrimination=True))
        assert low == high

    def test_theta_gradient_matches_difference(self):
        params = SZParams(theta=0.6, l_alpha=2.0, l_beta=1.0, discrimination=True)
        h = 1e-6
        _, up = OwlEquilibrium.sz_discrimination_equilibrium(params.model_copy(update={"theta": 0.6 + h}))
        _, down = OwlEquilibrium.sz_discrimination_equilibrium(params.model_copy(update={"theta": 0.6 - h}))
        numeric = ((up[0] - down[0]) / (2 * h), (up[1] - down[1]) / (2 * h))
        assert OwlEquilibrium.sz_profit_theta_gradient(params) == pytest.approx(numeric, rel=1e-6)

    def test_leader_view(self):
        view = OwlEquilibrium.sz_market_leader_view(SZParams(l_alpha=3.0, l_beta=3.0, discrimination=True))
        assert view["leader_internal"] == pytest.approx(2.0)
        assert view["follower_internal"] == pytest.approx(2.0)
        assert view["leader_differential"] == pytest.approx(1.0)
        assert view["follower_differential"] == pytest.approx(1.0)
        assert view["alpha_minus_beta_A"] > 0 > view["alpha_minus_beta_B"]

    def test_theta_sweep(self):
        table = OwlEquilibrium.sz_theta_sweep(SZParams(), [0.5, 0.75, 1.0])
        assert table["theta"].tolist() == [0.5, 0.75, 1.0]
        assert table["disc_p_A"].nunique() == 1
        assert np.all(np.diff(table["bench_profit_A"]) < 0)
        with pytest.raises((ValidationError, ConfigSlip)):
            OwlEquilibrium.sz_theta_sweep(SZParams(), [0.3])

    def test_loyalty_ratio_sweep(self):
        table = OwlEquilibrium.sz_loyalty_ratio_sweep(SZParams(), [0.5, 1.0, 2.0])
        assert table["l_beta"].tolist() == [0.5, 1.0, 2.0]
        assert bool(table.loc[table["ratio"] == 1.0, "benchmark_certified"].item())
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.sz_loyalty_ratio_sweep(SZParams(), [0.0])

    @pytest.mark.parametrize("theta", [0.5, 0.75, 1.0])
    @pytest.mark.parametrize("l_alpha, l_beta", [(1.0, 1.0), (3.0, 1.0), (1.0, 3.0), (2.0, 0.5)])
    @pytest.mark.parametrize("c", [0.0, 0.4])
    def test_certified_across_grid(self, theta, l_alpha, l_beta, c):
        params = SZParams(theta=theta, l_alpha=l_alpha, l_beta=l_beta, c=c, discrimination=True)
        prices, _ = OwlEquilibrium.sz_discrimination_equilibrium(params)
        report = OwlEquilibrium.sz_verify_nash(params, prices)
        assert report.mode == "discrimination"
        assert report.certified, report.max_gain

    def test_leader_differential_exceeds_follower(self):
        rng = np.random.default_rng(2021)
        for _ in range(1000):
            l_alpha = rng.uniform(0.5, 5.0)
            params = SZParams(
                theta=rng.uniform(0.5, 1.0),
                l_alpha=l_alpha,
                l_beta=l_alpha * rng.uniform(0.05, 0.99),
                c=rng.uniform(0.0, 2.0),
                discrimination=True,
            )
            view = OwlEquilibrium.sz_market_leader_view(params)
            assert view["alpha_minus_beta_A"] > view["alpha_minus_beta_B"], params
            assert view["leader_differential"] > view["follower_differential"], params


# ------------------------------------------------------------------------------
# Circular location demand
# ------------------------------------------------------------------------------

class TestCircularDemand:

    def test_surplus(self):
        assert OwlEquilibrium.b_consumer_surplus(1.0, 0.4, 2.0, 0.1) == pytest.approx(0.4)

    def test_monopoly_quantity(self):
        params = BorensteinParams(A=1.0, c_strength=10.0, n_brands=2)
        assert OwlEquilibrium.b_monopoly_quantity(params, 0.5) == pytest.approx(0.1)
        assert OwlEquilibrium.b_monopoly_quantity(params, 1.0) == 0.0

    def test_monopoly_reach_against_cheap_and_dear_neighbors(self):
        params = BorensteinParams(A=1.0, c_strength=1.0, n_brands=4)
        # neighbors reach 0.05, leaving 0.2 of each gap
        quantity, regime = OwlEquilibrium.b_demand(params, 0.82, 0.95)
        assert regime == "monopoly"
        assert quantity == pytest.approx(0.36)
        assert OwlEquilibrium.b_monopoly_quantity(params, 0.82, 0.95) == pytest.approx(quantity)
        assert OwlEquilibrium.b_monopoly_quantity(params, 0.82) == pytest.approx(0.25)
        assert OwlEquilibrium.b_monopoly_quantity(params, 0.82, 1.5) == pytest.approx(0.36)

    def test_kink_continuity(self):
        params = BorensteinParams(A=1.0, c_strength=2.0, n_brands=4)
        kink = OwlEquilibrium.b_kink_price(params, 0.9)
        assert kink == pytest.approx(0.6)
        below, _ = OwlEquilibrium.b_demand(params, kink - 1e-9, 0.9)
        above, _ = OwlEquilibrium.b_demand(params, kink + 1e-9, 0.9)
        assert below == pytest.approx(above, abs=1e-6)
        assert above == pytest.approx(0.4, abs=1e-6)

    def test_regimes(self):
        params = BorensteinParams(A=10.0, c_strength=1.0, n_brands=4)
        assert OwlEquilibrium.b_demand(params, 0.25, 0.25)[1] == "competitive"
        assert OwlEquilibrium.b_demand(params, 0.0, 1.0) == (pytest.approx(0.5), "capture")
        assert OwlEquilibrium.b_demand(params, 10.0, 0.25) == (0.0, "priced_out")

    def test_competitive_split_sums_to_gap(self):
        params = BorensteinParams(A=10.0, c_strength=1.0, n_brands=4)
        q_x, q_y = OwlEquilibrium.b_competitive_quantity(params, 0.3, 0.25)
        assert q_x + q_y == pytest.approx(2 * params.L * params.spacing)

    def test_gradient_matches_closed_form(self):
        params = BorensteinParams(A=10.0, c_strength=1.0, n_brands=4)
        # profit P * L * (s + (P_y - P) / c)
        analytic = params.L * (params.spacing + (0.25 - 2 * 0.3) / params.c_strength)
        assert OwlEquilibrium.b_profit_gradient(params, 0.3, 0.25) == pytest.approx(analytic, abs=1e-6)

    def test_niche_vs_common(self):
        params = BorensteinParams(c_strength=10.0, n_brands=4)
        view = OwlEquilibrium.b_niche_vs_common(params, A_niche=2.0, A_common=1.0, price=0.5)
        assert view["q_niche"] == pytest.approx(0.25)
        assert view["q_common"] == pytest.approx(0.1)
        assert view["niche_advantage"] == pytest.approx(0.15)


class TestSymmetricEquilibrium:

    def test_competitive(self):
        params = BorensteinParams(A=10.0, c_strength=1.0, n_brands=4, m=0.0)
        result = OwlEquilibrium.b_symmetric_equilibrium(params)
        assert result.price == pytest.approx(0.25, abs=1e-6)
        assert result.regime == "competitive"
        assert abs(OwlEquilibrium.b_profit_gradient(params, result.price)) < 1e-6

    def test_monopoly(self):
        params = BorensteinParams(A=1.0, c_strength=10.0, n_brands=2)
        result = OwlEquilibrium.b_symmetric_equilibrium(params)
        assert result.price == pytest.approx(0.5, abs=1e-6)
        assert result.regime == "monopoly"
        assert result.quantity == pytest.approx(0.1, abs=1e-6)

    def test_kink(self):
        params = BorensteinParams(A=0.6, c_strength=1.0, n_brands=2)
        result = OwlEquilibrium.b_symmetric_equilibrium(params)
        assert result.price == pytest.approx(0.35, abs=1e-6)

    def test_best_response_is_global(self):
        params = BorensteinParams(A=2.0, c_strength=3.0, n_brands=3, m=0.1)
        for rival in (0.2, 0.6, 1.0, 1.5):
            best = OwlEquilibrium.b_best_response(params, rival)
            grid = np.linspace(params.m, params.A, 4001)
            brute = max(OwlEquilibrium.b_profit(params, p, rival) for p in grid)
            assert OwlEquilibrium.b_profit(params, best, rival) >= brute - 1e-9

    def test_uniform_segments_without_discrimination_gap(self):
        params = BorensteinParams(A=10.0, c_strength=1.0, n_brands=4)
        result = OwlEquilibrium.b_symmetric_equilibrium(params, with_discrimination=True)
        assert result.price_low == pytest.approx(result.price, abs=1e-6)
        assert result.theta_disc == pytest.approx(0.0, abs=1e-5)

    def test_monopoly_segments_discriminate(self):
        params = BorensteinParams(A=1.0, c_strength=10.0, n_brands=2, low_value_ratio=0.5)
        result = OwlEquilibrium.b_symmetric_equilibrium(params, with_discrimination=True)
        assert result.price == pytest.approx(0.5, abs=1e-6)
        assert result.price_low == pytest.approx(0.25, abs=1e-6)
        assert result.theta_disc == pytest.approx(0.5, abs=1e-5)

    def test_intensity(self):
        assert OwlEquilibrium.b_discrimination_intensity(0.0, 2.0) == 1.0
        assert OwlEquilibrium.b_discrimination_intensity(2.0, 2.0) == 0.0
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.b_discrimination_intensity(3.0, 2.0)
        with pytest.raises(ConfigSlip):
            OwlEquilibrium.b_discrimination_intensity(0.0, 0.0)
