"""
OWL ECONOMETRICS V8.0
The Regression Engine for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Ordinary least squares with a pivoted-QR rank check, Gaussian information
criteria, exhaustive best-subset search per step size over the control
variables, interaction builders (period / category / market leader x Niche),
pooled OLS over the stacked panel, and publication-style coefficient tables.

CORE CAPABILITIES:
1. ols_fit (classical, HC1, by-app clustered standard errors).
2. gaussian_loglik / AIC / BIC with k = p + 1.
3. best_subset_step, step_ladder, select_step_model.
4. build_design / build_interactions / pooled_ols.
5. regression_table (CSV) and markdown emitter.

INTEGRATIONS:
- scipy.linalg (QR, triangular solves), scipy.stats (t distribution)
- pydantic (RegressionSpec)
- Bananas (ConfigSlip / NumericSlip)
- Monkey Heart (Logging)
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import linalg, stats

from bananas import BananaSlip, Bananas, ConfigSlip, DataSlip, NumericSlip
from monkey_heart import MonkeyHeart
from rabbit_corpus import BASELINE_CATEGORY, CATEGORIES, CONTROLS, PERIODS, RabbitCorpus


RANK_TOLERANCE = 1e-10
LOGLIK_FLOOR = 1e-300
NESTED_SLACK = 1e-9

BASE_TERMS = ("const", "niche") + tuple(c for c in CATEGORIES if c != BASELINE_CATEGORY)
INTERACTION_SCHEMES = ("period", "category", "ml")

TERM_LABELS = {
    "const": "Intercept",
    "niche": "Niche",
    "log_reviews": "logReviews",
    "days_since_launch": "DaysSinceLaunch",
    "rating": "Rating",
    "size_mb": "AppSize",
    "adult": "AdultContent",
    "ml": "ML",
    **{c: c.capitalize() for c in CATEGORIES},
    **{p: p.capitalize() for p in PERIODS},
}


def term_label(term: str) -> str:
    if term.endswith("_x_niche"):
        return f"{term_label(term[: -len('_x_niche')])} x Niche"
    return TERM_LABELS.get(term, term)


# ==============================================================================
# 📐 TYPES
# ==============================================================================

class RegressionSpec(BaseModel):
    """What to regress, on which sample, with which terms."""

    model_config = ConfigDict(frozen=True)

    outcome: str
    base_terms: Tuple[str, ...] = BASE_TERMS
    candidate_controls: Tuple[str, ...] = CONTROLS
    controls: Tuple[str, ...] = ()
    interactions: Tuple[Literal["period", "category", "ml"], ...] = ()
    sample_filter: Literal["full", "market_leader", "market_follower"] = "full"
    pooled: bool = False
    month: Optional[int] = None

    @model_validator(mode="after")
    def _consistent(self) -> "RegressionSpec":
        if "const" not in self.base_terms:
            raise ValueError("the intercept 'const' must be a base term")
        unknown = set(self.controls) - set(self.candidate_controls)
        if unknown:
            raise ValueError(f"controls {sorted(unknown)} are not candidate controls")
        return self

    def with_controls(self, controls: Sequence[str]) -> "RegressionSpec":
        return self.model_copy(update={"controls": tuple(controls)})


@dataclass(frozen=True)
class FitResult:
    coefficients: pd.Series
    std_errors: pd.Series
    t_values: pd.Series
    p_values: pd.Series
    n: int
    k_params: int
    rss: float
    log_likelihood: float
    aic: float
    bic: float
    r_squared: float
    se_mode: str = "classical"
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)
    fitted: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def terms(self) -> Tuple[str, ...]:
        return tuple(self.coefficients.index)

    @property
    def df_resid(self) -> int:
        return self.n - (self.k_params - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "terms": list(self.terms),
            "coefficients": {t: float(v) for t, v in self.coefficients.items()},
            "std_errors": {t: float(v) for t, v in self.std_errors.items()},
            "p_values": {t: float(v) for t, v in self.p_values.items()},
            "n": self.n,
            "k": self.k_params,
            "rss": self.rss,
            "loglik": self.log_likelihood,
            "aic": self.aic,
            "bic": self.bic,
            "r_squared": self.r_squared,
            "se_mode": self.se_mode,
        }


@dataclass(frozen=True)
class Design:
    X: pd.DataFrame
    y: pd.Series
    clusters: pd.Series


@dataclass(frozen=True)
class StepResult:
    step: int
    controls: Tuple[str, ...]
    fit: FitResult
    scores: pd.DataFrame


@dataclass(frozen=True)
class StepChoice:
    step: int
    aic_step: int
    bic_step: int

    @property
    def bic_agrees(self) -> bool:
        return self.bic_step == self.step


# ==============================================================================
# 🦉 OWL ECONOMETRICS CLASS
# ==============================================================================

class OwlEconometrics:

    # ==========================================================================
    # 📏 OLS
    # ==========================================================================

    @staticmethod
    def ols_fit(
        design: Union[pd.DataFrame, np.ndarray],
        y: Union[pd.Series, np.ndarray],
        se_mode: str = "classical",
        clusters: Optional[Sequence[Any]] = None,
        names: Optional[Sequence[str]] = None,
    ) -> FitResult:
        """
        Least squares via pivoted QR. Columns whose pivot falls below
        1e-10 x the largest one are reported as collinear.
        """
        if isinstance(design, pd.DataFrame):
            names = [str(c) for c in design.columns]
        X = np.asarray(design, dtype=float)
        target = np.asarray(y, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] != target.size:
            raise ConfigSlip(f"design {X.shape} does not match y of length {target.size}")
        n, p = X.shape
        names = list(names) if names is not None else [f"x{j}" for j in range(p)]
        if n <= p:
            raise NumericSlip(f"need more observations than columns (n={n}, p={p})", {"n": n, "p": p})
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(target))):
            raise DataSlip("design or outcome has non-finite values")

        Q, R, pivot = linalg.qr(X, mode="economic", pivoting=True)
        magnitude = np.abs(np.diag(R))
        rank = int((magnitude > magnitude[0] * RANK_TOLERANCE).sum()) if magnitude[0] > 0 else 0
        if rank < p:
            collinear = sorted(names[j] for j in pivot[rank:])
            raise NumericSlip(f"rank-deficient design; collinear column(s): {collinear}", {"collinear": collinear})

        beta = np.empty(p)
        beta[pivot] = linalg.solve_triangular(R, Q.T @ target)
        fitted = X @ beta
        residuals = target - fitted
        rss = float(residuals @ residuals)
        df_resid = n - p

        r_inv = linalg.solve_triangular(R, np.eye(p))
        bread = np.empty((p, p))
        bread[np.ix_(pivot, pivot)] = r_inv @ r_inv.T

        if se_mode == "classical":
            cov = bread * (rss / df_resid)
        elif se_mode == "hc1":
            meat = (X * (residuals ** 2)[:, None]).T @ X
            cov = bread @ meat @ bread * (n / df_resid)
        elif se_mode == "cluster":
            if clusters is None:
                raise ConfigSlip("cluster standard errors need cluster ids")
            codes, uniques = pd.factorize(pd.Series(list(clusters)), sort=True)
            groups = len(uniques)
            if groups < 2:
                raise NumericSlip("cluster standard errors need at least two clusters")
            scores = np.zeros((groups, p))
            np.add.at(scores, codes, X * residuals[:, None])
            cov = bread @ (scores.T @ scores) @ bread
            cov *= groups / (groups - 1) * (n - 1) / df_resid
        else:
            raise ConfigSlip(f"unknown se_mode '{se_mode}'")

        se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            t_values = beta / se
        p_values = 2.0 * stats.t.sf(np.abs(t_values), df_resid)

        has_intercept = bool(np.any(np.all(X == 1.0, axis=0)))
        tss = float(((target - target.mean()) ** 2).sum()) if has_intercept else float(target @ target)
        r_squared = float(np.clip(1.0 - rss / tss, 0.0, 1.0)) if tss > 0 else 0.0

        loglik = OwlEconometrics.gaussian_loglik(rss, n)
        k = p + 1
        index = pd.Index(names, name="term")
        return FitResult(
            coefficients=pd.Series(beta, index=index),
            std_errors=pd.Series(se, index=index),
            t_values=pd.Series(t_values, index=index),
            p_values=pd.Series(p_values, index=index),
            n=n,
            k_params=k,
            rss=rss,
            log_likelihood=loglik,
            aic=OwlEconometrics.aic_value(loglik, k),
            bic=OwlEconometrics.bic_value(loglik, k, n),
            r_squared=r_squared,
            se_mode=se_mode,
            residuals=residuals,
            fitted=fitted,
        )

    # ==========================================================================
    # 🧾 INFORMATION CRITERIA
    # ==========================================================================

    @staticmethod
    def gaussian_loglik(rss: float, n: int) -> float:
        """-(n/2)(ln 2pi + ln(rss/n) + 1), with rss/n floored at 1e-300."""
        if rss < 0 or n < 1:
            raise ConfigSlip(f"need rss >= 0 and n >= 1 (rss={rss}, n={n})")
        return -0.5 * n * (np.log(2.0 * np.pi) + np.log(max(rss / n, LOGLIK_FLOOR)) + 1.0)

    @staticmethod
    def aic_value(loglik: float, k: int) -> float:
        return -2.0 * loglik + 2.0 * k

    @staticmethod
    def bic_value(loglik: float, k: int, n: int) -> float:
        return -2.0 * loglik + np.log(n) * k

    @staticmethod
    def aic(fit: FitResult) -> float:
        return OwlEconometrics.aic_value(fit.log_likelihood, fit.k_params)

    @staticmethod
    def bic(fit: FitResult) -> float:
        return OwlEconometrics.bic_value(fit.log_likelihood, fit.k_params, fit.n)

    # ==========================================================================
    # 🧱 DESIGNS
    # ==========================================================================

    @staticmethod
    def build_interactions(rows: pd.DataFrame, scheme: str) -> pd.DataFrame:
        """
        Main effect D plus D x Niche for every non-baseline dummy D of the
        scheme (period: after_1..after_4, category: all but lifestyle, ml).
        """
        if scheme == "period":
            dummies = {p: rows["period"] == p for p in PERIODS[1:]}
        elif scheme == "category":
            dummies = {c: rows["category"] == c for c in CATEGORIES if c != BASELINE_CATEGORY}
        elif scheme == "ml":
            dummies = {"ml": rows["market_leader"].astype(bool)}
        else:
            raise ConfigSlip(f"unknown interaction scheme '{scheme}'; use one of {INTERACTION_SCHEMES}")
        niche = rows["niche"].astype(float)
        columns: Dict[str, pd.Series] = {}
        for name, mask in dummies.items():
            main = mask.astype(float)
            columns[name] = main
            columns[f"{name}_x_niche"] = main * niche
        return pd.DataFrame(columns, index=rows.index)

    @staticmethod
    def sample_rows(rows: pd.DataFrame, spec: RegressionSpec) -> pd.DataFrame:
        sub = rows if spec.pooled else RabbitCorpus.cross_section(rows, spec.month)
        if spec.sample_filter == "market_leader":
            sub = sub[sub["market_leader"].astype(bool)]
        elif spec.sample_filter == "market_follower":
            sub = sub[~sub["market_leader"].astype(bool)]
        return sub

    @staticmethod
    def build_design(rows: pd.DataFrame, spec: RegressionSpec) -> Design:
        """
        Columns: base terms, period dummies (pooled), interaction blocks, then
        the RegressionSpec controls. Rows with gaps are dropped; dummy or interaction
        columns without variation in the sample are dropped with a warning.
        """
        sub = OwlEconometrics.sample_rows(rows, spec)
        columns: Dict[str, pd.Series] = {}
        for term in spec.base_terms:
            if term == "const":
                columns[term] = pd.Series(1.0, index=sub.index)
            elif term in CATEGORIES:
                columns[term] = (sub["category"] == term).astype(float)
            else:
                columns[term] = pd.to_numeric(sub[term], errors="coerce").astype(float)
        if spec.pooled:
            for period in PERIODS[1:]:
                columns[period] = (sub["period"] == period).astype(float)
        for scheme in spec.interactions:
            for name, values in OwlEconometrics.build_interactions(sub, scheme).items():
                columns.setdefault(name, values)
        for control in spec.controls:
            columns[control] = pd.to_numeric(sub[control], errors="coerce").astype(float)

        X = pd.DataFrame(columns, index=sub.index)
        y = pd.to_numeric(sub[spec.outcome], errors="coerce").astype(float)
        complete = X.notna().all(axis=1) & y.notna()
        X, y = X[complete], y[complete]

        protected = {"const", "niche", *spec.controls}
        flat = [c for c in X.columns if c not in protected and X[c].nunique() <= 1]
        if flat:
            Bananas.notify("WARNING", f"{spec.outcome}/{spec.sample_filter}: constant column(s) {flat} dropped")
            X = X.drop(columns=flat)
        clusters = sub.loc[X.index, "app_id"] if "app_id" in sub.columns else pd.Series(X.index, index=X.index)
        return Design(X, y, clusters)

    @staticmethod
    def fit_spec(rows: pd.DataFrame, spec: RegressionSpec, se_mode: str = "classical") -> FitResult:
        design = OwlEconometrics.build_design(rows, spec)
        return OwlEconometrics.ols_fit(design.X, design.y, se_mode, design.clusters)

    @staticmethod
    def pooled_ols(rows: pd.DataFrame, spec: RegressionSpec, se_mode: str = "classical") -> FitResult:
        """One OLS on the stacked app x month sample with period dummies."""
        pooled = spec.model_copy(update={"pooled": True})
        return OwlEconometrics.fit_spec(rows, pooled, se_mode)

    # ==========================================================================
    # 🪜 STEP MODELS
    # ==========================================================================

    @staticmethod
    def best_subset_step(
        rows: pd.DataFrame,
        spec: RegressionSpec,
        step: int,
        se_mode: str = "classical",
        workers: int = 1,
        design: Optional[Design] = None,
    ) -> StepResult:
        """
        Fits every size-`step` subset of the candidate controls on top of the
        base terms (one common sample: rows complete in every candidate) and
        keeps the lowest AIC; ties go to BIC, then to candidate order.
        """
        candidates = tuple(spec.candidate_controls)
        if not 0 <= step <= len(candidates):
            raise ConfigSlip(f"step {step} outside [0, {len(candidates)}]")
        if design is None:
            design = OwlEconometrics.build_design(rows, spec.with_controls(candidates))
        others = [c for c in design.X.columns if c not in candidates]

        def fit_subset(subset: Tuple[str, ...]):
            try:
                fit = OwlEconometrics.ols_fit(design.X[others + list(subset)], design.y, se_mode, design.clusters)
            except BananaSlip as slip:
                Bananas.notify("WARNING", f"{spec.outcome} step {step} subset {subset} skipped: {slip}")
                return subset, None
            return subset, fit

        subsets = list(combinations(candidates, step))
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = list(pool.map(fit_subset, subsets))

        fitted = [(s, f) for s, f in results if f is not None]
        if not fitted:
            raise NumericSlip(f"{spec.outcome}: every subset at step {step} failed")

        def rank_key(item):
            subset, fit = item
            return fit.aic, fit.bic, tuple(candidates.index(c) for c in subset)

        best_subset, best_fit = min(fitted, key=rank_key)
        scores = pd.DataFrame([
            {
                "step": step,
                "controls": "+".join(subset) if subset else "(none)",
                "n": fit.n,
                "k": fit.k_params,
                "rss": fit.rss,
                "aic": fit.aic,
                "bic": fit.bic,
                "best": subset == best_subset,
            }
            for subset, fit in fitted
        ])
        return StepResult(step, best_subset, best_fit, scores)

    @staticmethod
    def step_ladder(
        rows: pd.DataFrame, spec: RegressionSpec, se_mode: str = "classical", workers: int = 1
    ) -> List[StepResult]:
        """Steps 0..len(candidates); checks that adding a control never raises RSS."""
        candidates = tuple(spec.candidate_controls)
        design = OwlEconometrics.build_design(rows, spec.with_controls(candidates))
        steps = [
            OwlEconometrics.best_subset_step(rows, spec, j, se_mode, workers, design)
            for j in range(len(candidates) + 1)
        ]
        OwlEconometrics._check_nested(steps)
        return steps

    @staticmethod
    def _check_nested(steps: Sequence[StepResult]) -> None:
        rss = {}
        for result in steps:
            for _, row in result.scores.iterrows():
                key = frozenset() if row["controls"] == "(none)" else frozenset(row["controls"].split("+"))
                rss[key] = row["rss"]
        for subset, value in rss.items():
            for control in subset:
                parent = rss.get(subset - {control})
                if parent is not None and value > parent * (1.0 + NESTED_SLACK) + NESTED_SLACK:
                    raise NumericSlip(f"adding {control} raised RSS ({parent} -> {value})")

    @staticmethod
    def select_step_model(steps: Union[Sequence[StepResult], pd.DataFrame], margin: float = 2.0) -> StepChoice:
        """
        Smallest step whose AIC is within `margin` of the minimum AIC;
        the AIC-minimizing and BIC-minimizing steps are reported alongside.
        """
        if isinstance(steps, pd.DataFrame):
            table = steps.loc[:, ["step", "aic", "bic"]]
        else:
            table = pd.DataFrame([{"step": s.step, "aic": s.fit.aic, "bic": s.fit.bic} for s in steps])
        if table.empty:
            raise ConfigSlip("no scored steps to choose from")
        table = table.sort_values("step").reset_index(drop=True)
        best_aic = table["aic"].min()
        chosen = int(table.loc[table["aic"] <= best_aic + margin, "step"].min())
        return StepChoice(
            step=chosen,
            aic_step=int(table.loc[table["aic"].idxmin(), "step"]),
            bic_step=int(table.loc[table["bic"].idxmin(), "step"]),
        )

    # ==========================================================================
    # 🗞️ TABLES
    # ==========================================================================

    @staticmethod
    def format_number(value: float, decimals: int = 2) -> str:
        if value is None or not np.isfinite(value):
            return ""
        text = f"{value:.{decimals}f}"
        return "0.0" if float(text) == 0.0 else text

    @staticmethod
    def stars(p_value: float, thresholds: Sequence[float] = (0.10, 0.05, 0.01)) -> str:
        if p_value is None or not np.isfinite(p_value):
            return ""
        return "*" * sum(1 for t in thresholds if p_value < t)

    @staticmethod
    def regression_table(
        fits: Mapping[str, FitResult],
        terms: Optional[Sequence[str]] = None,
        star_thresholds: Sequence[float] = (0.10, 0.05, 0.01),
        decimals: int = 2,
    ) -> pd.DataFrame:
        """
        Coefficient line (with stars) and a parenthesized SE line per term,
        then N, R2, AIC and BIC. One column per fit.
        """
        labels = list(fits)
        if terms is None:
            terms = []
            for fit in fits.values():
                terms.extend(t for t in fit.terms if t not in terms)
        fmt = OwlEconometrics.format_number
        body = []
        for term in terms:
            coef_line = {"term": term_label(term)}
            se_line = {"term": ""}
            for label in labels:
                fit = fits[label]
                if term in fit.coefficients.index:
                    coef_line[label] = fmt(fit.coefficients[term], decimals) + OwlEconometrics.stars(fit.p_values[term], star_thresholds)
                    se_line[label] = f"({fmt(fit.std_errors[term], decimals)})"
                else:
                    coef_line[label] = ""
                    se_line[label] = ""
            body.extend([coef_line, se_line])
        body.append({"term": "N", **{l: str(fits[l].n) for l in labels}})
        body.append({"term": "R2", **{l: fmt(fits[l].r_squared, decimals) for l in labels}})
        body.append({"term": "AIC", **{l: fmt(fits[l].aic, decimals) for l in labels}})
        body.append({"term": "BIC", **{l: fmt(fits[l].bic, decimals) for l in labels}})
        return pd.DataFrame(body, columns=["term"] + labels)

    @staticmethod
    def to_markdown(table: pd.DataFrame) -> str:
        def cell(value: Any) -> str:
            text = "" if value is None or (isinstance(value, float) and np.isnan(value)) else str(value)
            return text.replace("|", "\\|")

        header = "| " + " | ".join(cell(c) for c in table.columns) + " |"
        rule = "|" + "|".join("---" for _ in table.columns) + "|"
        lines = [header, rule]
        for record in table.itertuples(index=False):
            lines.append("| " + " | ".join(cell(v) for v in record) + " |")
        return "\n".join(lines)


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦉 OWL ECONOMETRICS V8.0 DIAGNOSTIC\n" + "=" * 40)

    rng = np.random.default_rng(3)
    x = rng.normal(size=200)
    X = pd.DataFrame({"const": 1.0, "x": x})

    print("\n[TEST 1] Exact fit y = 2x...")
    exact = OwlEconometrics.ols_fit(X, 2.0 * x)
    print(f" > beta={exact.coefficients.round(6).tolist()} rss={exact.rss:.2e}")

    print("\n[TEST 2] Log-likelihood n=1 rss=1...")
    print(f" > {OwlEconometrics.gaussian_loglik(1.0, 1):.6f}")

    print("\n[TEST 3] Table formatting...")
    print(f" > {OwlEconometrics.format_number(-0.334)}{OwlEconometrics.stars(0.001)} ({OwlEconometrics.format_number(0.031)})")

    print("\n" + "=" * 40)
    print("🦉 OWL ECONOMETRICS SYSTEM: OPERATIONAL")
