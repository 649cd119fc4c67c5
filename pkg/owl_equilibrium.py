"""
OWL EQUILIBRIUM V8.0
The Pricing Game Calculator for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Two theory engines behind the pricing hypotheses.
The asymmetric-loyalty duopoly (firm A holds share theta of the market at
equal prices, loyalty in each group is uniform on [0, l]) with closed-form
uniform-price and group-price equilibria, plus a grid certifier.
The circular-location demand system (N brands on a unit circle, linear
decline in reservation price with arc distance) with a regime dispatcher and
a damped best-response search for the symmetric price.

CORE CAPABILITIES:
1. Loyalty CDF, switching rule, profits, both closed-form equilibria.
2. Theta gradients, grid Nash certification, leader/follower view, sweeps.
3. Surplus, monopoly / competitive / capture demand, kink price.
4. Symmetric equilibrium (single price or two segment prices).

INTEGRATIONS:
- pydantic (parameter models)
- Bananas (ConfigSlip / NumericSlip)
- Monkey Heart (Logging)
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from bananas import Bananas, ConfigSlip, NumericSlip
from monkey_heart import MonkeyHeart


DEVIATION_RANGE = 0.5
DEVIATION_STEP = 1e-3
GAIN_TOLERANCE = 1e-9

BR_TOLERANCE = 1e-8
BR_DAMPING = 0.5
BR_MAX_ITER = 10_000


# ==============================================================================
# 📐 PARAMETER MODELS
# ==============================================================================

class SZParams(BaseModel):
    """Asymmetric-loyalty duopoly. Firm A is the larger firm (theta >= 1/2)."""

    model_config = ConfigDict(frozen=True)

    theta: float = Field(0.5, ge=0.5, le=1.0)
    l_alpha: float = Field(1.0, gt=0.0)
    l_beta: float = Field(1.0, gt=0.0)
    c: float = Field(0.0, ge=0.0)
    discrimination: bool = False


class SZPrices(BaseModel):
    """p_X is firm X's price to group alpha, p_tilde_X its price to group beta."""

    model_config = ConfigDict(frozen=True)

    p_A: float = Field(ge=0.0)
    p_tilde_A: float = Field(ge=0.0)
    p_B: float = Field(ge=0.0)
    p_tilde_B: float = Field(ge=0.0)

    @classmethod
    def uniform(cls, p_A: float, p_B: float) -> "SZPrices":
        return cls(p_A=p_A, p_tilde_A=p_A, p_B=p_B, p_tilde_B=p_B)

    @property
    def is_uniform(self) -> bool:
        return self.p_A == self.p_tilde_A and self.p_B == self.p_tilde_B


class BorensteinParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_brands: int = Field(4, ge=2)
    A: float = Field(1.0, gt=0.0)
    c_strength: float = Field(1.0, gt=0.0)
    L: float = Field(1.0, gt=0.0)
    F: float = Field(0.0, ge=0.0)
    m: float = Field(0.0, ge=0.0)
    segment_share: float = Field(0.5, gt=0.0, lt=1.0)
    low_value_ratio: float = Field(0.5, gt=0.0, le=1.0)

    @property
    def spacing(self) -> float:
        return 1.0 / self.n_brands


@dataclass(frozen=True)
class Deviation:
    firm: str
    prices: Tuple[float, float]
    gain: float


@dataclass(frozen=True)
class NashReport:
    mode: str
    profits: Tuple[float, float]
    max_gain: Dict[str, float]
    deviations: List[Deviation] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.deviations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "certified": self.certified,
            "profits": list(self.profits),
            "max_gain": self.max_gain,
            "deviations": [
                {"firm": d.firm, "prices": list(d.prices), "gain": d.gain} for d in self.deviations
            ],
        }


@dataclass(frozen=True)
class BorensteinEquilibrium:
    price: float
    quantity: float
    profit: float
    regime: str
    iterations: int
    price_low: Optional[float] = None
    theta_disc: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "price": self.price,
            "price_low": self.price_low,
            "quantity": self.quantity,
            "profit": self.profit,
            "regime": self.regime,
            "iterations": self.iterations,
            "theta_disc": self.theta_disc,
        }


# ==============================================================================
# 🦉 OWL EQUILIBRIUM CLASS
# ==============================================================================

class OwlEquilibrium:

    # ==========================================================================
    # 🤝 ASYMMETRIC LOYALTY DUOPOLY
    # ==========================================================================

    @staticmethod
    def sz_loyalty_cdf(x, l_k: float):
        """Uniform CDF on [0, l_k]."""
        if l_k <= 0:
            raise ConfigSlip(f"loyalty bound must be positive, got {l_k}")
        values = np.clip(np.asarray(x, dtype=float) / l_k, 0.0, 1.0)
        return values if np.ndim(x) else float(values)

    @staticmethod
    def sz_switch_decision(prices: SZPrices, loyalty: float, group: str) -> str:
        """Indifferent consumers stay with their group's product."""
        if loyalty < 0:
            raise ConfigSlip(f"loyalty must be nonnegative, got {loyalty}")
        if group == "alpha":
            return "stay" if prices.p_A <= prices.p_B + loyalty else "switch"
        if group == "beta":
            return "stay" if prices.p_tilde_B <= prices.p_tilde_A + loyalty else "switch"
        raise ConfigSlip(f"unknown group '{group}'; use alpha or beta")

    @staticmethod
    def _profit_arrays(params: SZParams, p_A, p_tilde_A, p_B, p_tilde_B):
        theta, c = params.theta, params.c
        cdf = OwlEquilibrium.sz_loyalty_cdf
        alpha_switch = cdf(np.asarray(p_A, dtype=float) - p_B, params.l_alpha)
        beta_switch = cdf(np.asarray(p_tilde_B, dtype=float) - p_tilde_A, params.l_beta)
        profit_A = theta * (np.asarray(p_A) - c) * (1.0 - alpha_switch) + (1.0 - theta) * (np.asarray(p_tilde_A) - c) * beta_switch
        profit_B = (1.0 - theta) * (np.asarray(p_tilde_B) - c) * (1.0 - beta_switch) + theta * (np.asarray(p_B) - c) * alpha_switch
        return profit_A, profit_B

    @staticmethod
    def sz_profits(params: SZParams, prices: SZPrices) -> Tuple[float, float]:
        profit_A, profit_B = OwlEquilibrium._profit_arrays(
            params, prices.p_A, prices.p_tilde_A, prices.p_B, prices.p_tilde_B
        )
        return float(profit_A), float(profit_B)

    @staticmethod
    def sz_benchmark_equilibrium(params: SZParams) -> Tuple[SZPrices, Tuple[float, float]]:
        """Uniform-price equilibrium; closed form with profits (1+t)^2/(9t) l and (2-t)^2/(9t) l."""
        if params.discrimination:
            raise ConfigSlip("benchmark equilibrium needs discrimination = false")
        theta, l_alpha, c = params.theta, params.l_alpha, params.c
        if not 0.5 <= theta <= 1.0:
            raise ConfigSlip(f"theta {theta} outside [0.5, 1]")
        prices = SZPrices.uniform(
            (1.0 + theta) / (3.0 * theta) * l_alpha + c,
            (2.0 - theta) / (3.0 * theta) * l_alpha + c,
        )
        profits = (
            (1.0 + theta) ** 2 / (9.0 * theta) * l_alpha,
            (2.0 - theta) ** 2 / (9.0 * theta) * l_alpha,
        )
        return prices, profits

    @staticmethod
    def sz_discrimination_equilibrium(params: SZParams) -> Tuple[SZPrices, Tuple[float, float]]:
        """Group-price equilibrium. Prices do not depend on theta."""
        theta, l_alpha, l_beta, c = params.theta, params.l_alpha, params.l_beta, params.c
        prices = SZPrices(
            p_A=2.0 / 3.0 * l_alpha + c,
            p_tilde_A=1.0 / 3.0 * l_beta + c,
            p_B=1.0 / 3.0 * l_alpha + c,
            p_tilde_B=2.0 / 3.0 * l_beta + c,
        )
        profits = (
            4.0 / 9.0 * theta * l_alpha + 1.0 / 9.0 * (1.0 - theta) * l_beta,
            4.0 / 9.0 * (1.0 - theta) * l_beta + 1.0 / 9.0 * theta * l_alpha,
        )
        return prices, profits

    @staticmethod
    def sz_equilibrium(params: SZParams) -> Tuple[SZPrices, Tuple[float, float]]:
        if params.discrimination:
            return OwlEquilibrium.sz_discrimination_equilibrium(params)
        return OwlEquilibrium.sz_benchmark_equilibrium(params)

    @staticmethod
    def sz_profit_theta_gradient(params: SZParams) -> Tuple[float, float]:
        """Slopes of the group-price equilibrium profits in theta."""
        l_alpha, l_beta = params.l_alpha, params.l_beta
        return (4.0 / 9.0 * l_alpha - 1.0 / 9.0 * l_beta, 1.0 / 9.0 * l_alpha - 4.0 / 9.0 * l_beta)

    @staticmethod
    def sz_verify_nash(
        params: SZParams,
        prices: SZPrices,
        grid_range: float = DEVIATION_RANGE,
        grid_step: float = DEVIATION_STEP,
        tolerance: float = GAIN_TOLERANCE,
    ) -> NashReport:
        """
        Scans each firm's unilateral deviations over relative offsets in
        [-grid_range, +grid_range]. Under discrimination both of a firm's
        prices move (2-D grid); otherwise the firm's single price moves.
        Deviations gaining more than `tolerance` are listed.
        """
        if grid_range <= 0 or grid_step <= 0:
            raise ConfigSlip("deviation grid needs positive range and step")
        offsets = np.round(np.arange(-grid_range, grid_range + grid_step / 2, grid_step), 12)
        offsets = np.union1d(offsets, [0.0])
        base = OwlEquilibrium.sz_profits(params, prices)
        mode = "discrimination" if params.discrimination else "benchmark"
        max_gain, deviations = {}, []

        for firm, own, slot in (("A", (prices.p_A, prices.p_tilde_A), 0), ("B", (prices.p_B, prices.p_tilde_B), 1)):
            own_alpha = np.clip(own[0] * (1.0 + offsets), 0.0, None)
            own_beta = np.clip(own[1] * (1.0 + offsets), 0.0, None)
            if params.discrimination:
                grid_alpha, grid_beta = np.meshgrid(own_alpha, own_beta, indexing="ij")
            else:
                grid_alpha, grid_beta = own_alpha, own_alpha.copy()
            if firm == "A":
                profit = OwlEquilibrium._profit_arrays(params, grid_alpha, grid_beta, prices.p_B, prices.p_tilde_B)[0]
            else:
                profit = OwlEquilibrium._profit_arrays(params, prices.p_A, prices.p_tilde_A, grid_alpha, grid_beta)[1]
            gains = np.asarray(profit) - base[slot]
            best = np.unravel_index(int(np.argmax(gains)), gains.shape)
            max_gain[firm] = float(gains[best])
            if gains[best] > tolerance:
                deviations.append(Deviation(firm, (float(grid_alpha[best]), float(grid_beta[best])), float(gains[best])))

        report = NashReport(mode, base, max_gain, deviations)
        if not report.certified:
            Bananas.notify("WARNING", f"{mode} prices are not a Nash equilibrium on the deviation grid", gains=max_gain)
        MonkeyHeart.log_numeric_event("NASH", {"mode": mode, "certified": report.certified, **max_gain})
        return report

    @staticmethod
    def sz_market_leader_view(params: SZParams) -> Dict[str, float]:
        """
        Group-price equilibrium read as leader (A, own group alpha) and
        follower (B, own group beta): internal = price to the own group,
        external = price to the rival's group.
        """
        prices, profits = OwlEquilibrium.sz_discrimination_equilibrium(params)
        view = {
            "leader_internal": prices.p_A,
            "leader_external": prices.p_tilde_A,
            "follower_internal": prices.p_tilde_B,
            "follower_external": prices.p_B,
            "leader_profit": profits[0],
            "follower_profit": profits[1],
        }
        view["leader_differential"] = view["leader_internal"] - view["leader_external"]
        view["follower_differential"] = view["follower_internal"] - view["follower_external"]
        view["alpha_minus_beta_A"] = prices.p_A - prices.p_tilde_A
        view["alpha_minus_beta_B"] = prices.p_B - prices.p_tilde_B
        return view

    @staticmethod
    def sz_theta_sweep(params: SZParams, thetas: Sequence[float]) -> pd.DataFrame:
        """Both equilibria over a grid of theta."""
        table = []
        for theta in thetas:
            point = SZParams(**{**params.model_dump(), "theta": float(theta)})
            bench, bench_profit = OwlEquilibrium.sz_benchmark_equilibrium(point.model_copy(update={"discrimination": False}))
            disc, disc_profit = OwlEquilibrium.sz_discrimination_equilibrium(point)
            table.append({
                "theta": float(theta),
                "bench_p_A": bench.p_A, "bench_p_B": bench.p_B,
                "bench_profit_A": bench_profit[0], "bench_profit_B": bench_profit[1],
                "disc_p_A": disc.p_A, "disc_p_tilde_A": disc.p_tilde_A,
                "disc_p_B": disc.p_B, "disc_p_tilde_B": disc.p_tilde_B,
                "disc_profit_A": disc_profit[0], "disc_profit_B": disc_profit[1],
            })
        return pd.DataFrame(table)

    @staticmethod
    def sz_loyalty_ratio_sweep(params: SZParams, ratios: Sequence[float]) -> pd.DataFrame:
        """
        Group-price equilibrium with l_beta = ratio * l_alpha, next to whether
        the uniform-price closed form survives the deviation grid there.
        """
        table = []
        for ratio in ratios:
            if ratio <= 0:
                raise ConfigSlip(f"loyalty ratio must be positive, got {ratio}")
            point = SZParams(**{**params.model_dump(), "l_beta": float(ratio) * params.l_alpha})
            view = OwlEquilibrium.sz_market_leader_view(point)
            bench_params = point.model_copy(update={"discrimination": False})
            bench, _ = OwlEquilibrium.sz_benchmark_equilibrium(bench_params)
            certified = OwlEquilibrium.sz_verify_nash(bench_params, bench).certified
            table.append({"ratio": float(ratio), "l_beta": point.l_beta, **view, "benchmark_certified": certified})
        return pd.DataFrame(table)

    # ==========================================================================
    # ⭕ CIRCULAR LOCATION DEMAND
    # ==========================================================================

    @staticmethod
    def b_consumer_surplus(A_i: float, P_x: float, c_i: float, arc_distance: float) -> float:
        return A_i - P_x - c_i * arc_distance

    @staticmethod
    def b_monopoly_quantity(params: BorensteinParams, P_x: float, P_y: Optional[float] = None) -> float:
        """
        2 L d with d = (A - P)/c; 0 when P >= A. The reach is capped at half
        the spacing, or, given the neighbors' price P_y, at the spacing left
        over by the neighbors' own reach.
        """
        if P_x >= params.A:
            return 0.0
        if P_y is None:
            cap = params.spacing / 2.0
        else:
            cap = max(params.spacing - max(params.A - P_y, 0.0) / params.c_strength, 0.0)
        reach = min((params.A - P_x) / params.c_strength, cap)
        return 2.0 * params.L * reach

    @staticmethod
    def b_kink_price(params: BorensteinParams, P_y: float) -> float:
        """Own price at which the two monopoly regions just touch."""
        return 2.0 * params.A - P_y - params.c_strength * params.spacing

    @staticmethod
    def b_competitive_quantity(params: BorensteinParams, P_x: float, P_y: float) -> Tuple[float, float]:
        """
        Indifference split of each gap between neighbors. A brand cheaper by
        at least c/N captures both adjacent gaps.
        """
        gap = params.c_strength * params.spacing
        whole = 2.0 * params.L * params.spacing
        if P_x <= P_y - gap:
            return whole, 0.0
        if P_y <= P_x - gap:
            return 0.0, whole
        q_x = params.L * (params.spacing + (P_y - P_x) / params.c_strength)
        q_y = params.L * (params.spacing + (P_x - P_y) / params.c_strength)
        return q_x, q_y

    @staticmethod
    def b_demand(params: BorensteinParams, P_x: float, P_y: float) -> Tuple[float, str]:
        """Own quantity against symmetric neighbors at P_y, with its regime."""
        A, c, spacing, L = params.A, params.c_strength, params.spacing, params.L
        if P_x >= A:
            return 0.0, "priced_out"
        reach = (A - P_x) / c
        if P_y >= A:
            # neighbors sell nothing; the gap caps the reach
            if reach <= spacing:
                return OwlEquilibrium.b_monopoly_quantity(params, P_x, P_y), "monopoly"
            return 2.0 * L * spacing, "capture"
        if reach + (A - P_y) / c <= spacing:
            return OwlEquilibrium.b_monopoly_quantity(params, P_x, P_y), "monopoly"
        if P_x <= P_y - c * spacing:
            return 2.0 * L * spacing, "capture"
        return OwlEquilibrium.b_competitive_quantity(params, P_x, P_y)[0], "competitive"

    @staticmethod
    def b_profit(params: BorensteinParams, P_x: float, P_y: float) -> float:
        quantity, _ = OwlEquilibrium.b_demand(params, P_x, P_y)
        return (P_x - params.m) * quantity - params.F

    @staticmethod
    def b_best_response(params: BorensteinParams, P_y: float) -> float:
        """
        Exact maximizer over [m, A]: profit is piecewise quadratic in own
        price, so the regime optima and the regime boundaries cover it.
        """
        A, m, gap = params.A, params.m, params.c_strength * params.spacing
        candidates = [
            (A + m) / 2.0,
            (m + P_y + gap) / 2.0,
            OwlEquilibrium.b_kink_price(params, P_y),
            P_y - gap,
            A - gap,
            m,
            A,
        ]
        prices = sorted({float(np.clip(p, m, A)) for p in candidates})
        profits = [OwlEquilibrium.b_profit(params, p, P_y) for p in prices]
        return prices[int(np.argmax(profits))]

    @staticmethod
    def _iterate_best_response(
        params: BorensteinParams, start: Optional[float] = None
    ) -> Tuple[float, int]:
        price = (params.A + params.m) / 2.0 if start is None else start
        trajectory = [price]
        for iteration in range(1, BR_MAX_ITER + 1):
            target = OwlEquilibrium.b_best_response(params, price)
            updated = (1.0 - BR_DAMPING) * price + BR_DAMPING * target
            trajectory.append(updated)
            if abs(updated - price) < BR_TOLERANCE:
                return updated, iteration
            price = updated
        raise NumericSlip(
            f"best-response iteration did not converge in {BR_MAX_ITER} steps",
            {"trajectory_tail": trajectory[-20:]},
        )

    @staticmethod
    def b_symmetric_equilibrium(params: BorensteinParams, with_discrimination: bool = False) -> BorensteinEquilibrium:
        """
        Symmetric price by damped best-response iteration. With
        discrimination every firm also prices a low-valuation segment
        (reservation price A * low_value_ratio) separately.
        """
        if not with_discrimination:
            price, iterations = OwlEquilibrium._iterate_best_response(params)
            quantity, regime = OwlEquilibrium.b_demand(params, price, price)
            result = BorensteinEquilibrium(price, quantity, (price - params.m) * quantity - params.F, regime, iterations)
        else:
            share = params.segment_share
            high = params.model_copy(update={"L": params.L * share, "F": 0.0})
            low = params.model_copy(update={"L": params.L * (1.0 - share), "F": 0.0, "A": params.A * params.low_value_ratio})
            p_high, it_high = OwlEquilibrium._iterate_best_response(high)
            p_low, it_low = OwlEquilibrium._iterate_best_response(low)
            q_high, regime = OwlEquilibrium.b_demand(high, p_high, p_high)
            q_low, _ = OwlEquilibrium.b_demand(low, p_low, p_low)
            profit = (p_high - params.m) * q_high + (p_low - params.m) * q_low - params.F
            result = BorensteinEquilibrium(
                p_high, q_high + q_low, profit, regime, max(it_high, it_low),
                price_low=p_low,
                theta_disc=OwlEquilibrium.b_discrimination_intensity(p_low, p_high),
            )
        MonkeyHeart.log_numeric_event("BORENSTEIN", result.to_dict())
        return result

    @staticmethod
    def b_discrimination_intensity(P_L: float, P_H: float) -> float:
        """1 - P_L / P_H: 0 without discrimination, 1 when the low price is 0."""
        if P_H <= 0:
            raise ConfigSlip(f"high price must be positive, got {P_H}")
        if not 0.0 <= P_L <= P_H:
            raise ConfigSlip(f"need 0 <= P_L <= P_H, got ({P_L}, {P_H})")
        return 1.0 - P_L / P_H

    @staticmethod
    def b_profit_gradient(params: BorensteinParams, price: float, P_y: Optional[float] = None, h: float = 1e-6) -> float:
        """Central difference of own profit in own price."""
        rival = price if P_y is None else P_y
        up = OwlEquilibrium.b_profit(params, price + h, rival)
        down = OwlEquilibrium.b_profit(params, price - h, rival)
        return (up - down) / (2.0 * h)

    @staticmethod
    def b_niche_vs_common(params: BorensteinParams, A_niche: float, A_common: float, price: float) -> Dict[str, float]:
        """Monopoly-region quantities of a niche and a common brand at one price."""
        niche = params.model_copy(update={"A": A_niche})
        common = params.model_copy(update={"A": A_common})
        q_niche = OwlEquilibrium.b_monopoly_quantity(niche, price)
        q_common = OwlEquilibrium.b_monopoly_quantity(common, price)
        return {
            "price": price,
            "A_niche": A_niche,
            "A_common": A_common,
            "q_niche": q_niche,
            "q_common": q_common,
            "niche_advantage": q_niche - q_common,
        }


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦉 OWL EQUILIBRIUM V8.0 DIAGNOSTIC\n" + "=" * 40)

    print("\n[TEST 1] Uniform prices at theta = 1/2...")
    prices, profits = OwlEquilibrium.sz_benchmark_equilibrium(SZParams(theta=0.5, l_alpha=1.0))
    print(f" > {prices} profits={profits}")

    print("\n[TEST 2] Group prices, l = 3...")
    params = SZParams(l_alpha=3.0, l_beta=3.0, discrimination=True)
    prices, _ = OwlEquilibrium.sz_discrimination_equilibrium(params)
    print(f" > {prices}  certified={OwlEquilibrium.sz_verify_nash(params, prices).certified}")

    print("\n[TEST 3] Circular symmetric price (A=10, c=1, N=4)...")
    print(f" > {OwlEquilibrium.b_symmetric_equilibrium(BorensteinParams(A=10.0)).to_dict()}")

    print("\n" + "=" * 40)
    print("🦉 OWL EQUILIBRIUM SYSTEM: OPERATIONAL")
