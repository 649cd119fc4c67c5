"""
RABBIT CORPUS V8.0
The Panel Intake & Variable Factory for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
The Rabbit takes the scraped app panel (one JSON line per app and wave),
fills the holes the scraper left behind, and turns the filled panel into the
analysis rows every regression runs on. Each stage is a pure function
panel -> panel; nothing is edited in place.

CORE CAPABILITIES:
1. JSONL ingest (strict record schema, duplicate and parse checks).
2. Imputation: stable variables (mode/mean), LOCF variables, monetization flags.
3. App death, genre -> category, install tiers, market-leader split.
4. Derived analysis rows (logs, periods, change events).
5. Descriptive statistics and correlation matrices.

INTEGRATIONS:
- Bananas (ParseSlip / DataSlip)
- Monkey Heart (Logging)
"""

import json
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from bananas import Bananas, DataSlip, ParseSlip
from monkey_heart import MonkeyHeart


# ==============================================================================
# 📐 SCHEMA
# ==============================================================================

RECORD_FIELDS = (
    "app_id", "month", "scraped", "description", "price", "installs_lb",
    "contains_ads", "offers_iap", "rating", "reviews", "released", "size_mb",
    "adult", "genre_id", "firm",
)

PANEL_DTYPES = {
    "app_id": "string",
    "month": "int64",
    "scraped": "bool",
    "description": "string",
    "price": "Float64",
    "installs_lb": "Int64",
    "contains_ads": "boolean",
    "offers_iap": "boolean",
    "rating": "Float64",
    "reviews": "Int64",
    "size_mb": "Float64",
    "adult": "boolean",
    "genre_id": "string",
    "firm": "string",
}

STABLE_DISCRETE = ("adult", "released", "genre_id", "description")
STABLE_CONTINUOUS = ("size_mb", "rating", "reviews")
LOCF_FIELDS = ("installs_lb", "price", "firm")
MONETIZATION_FLAGS = ("contains_ads", "offers_iap")

DEFAULT_WAVE_DATES: Dict[int, date] = {
    month: wave
    for month, wave in enumerate(
        [date(2019, m, 15) for m in range(7, 12)]
        + [date(2020, 3, 15), date(2020, 4, 15)]
        + [date(2020, m, 15) for m in range(9, 13)]
        + [date(2021, m, 15) for m in range(1, 8)]
    )
}

# period label -> first calendar day of its window
PERIOD_STARTS = (
    ("before", date.min),
    ("after_1", date(2020, 3, 1)),
    ("after_2", date(2020, 9, 1)),
    ("after_3", date(2021, 1, 1)),
    ("after_4", date(2021, 5, 1)),
)
PERIODS = tuple(label for label, _ in PERIOD_STARTS)

TIER1_FLOOR = 10_000_000
TIER2_FLOOR = 100_000

CATEGORIES = ("game", "business", "social", "medical", "lifestyle")
BASELINE_CATEGORY = "lifestyle"

GAME_GENRES = frozenset({
    "action", "adventure", "arcade", "board", "card", "casino", "casual",
    "educational", "puzzle", "racing", "role playing", "simulation",
    "strategy", "trivia", "word",
})
GENRE_GROUPS = {
    "business": frozenset({
        "finance", "education", "news and magazine", "news and magazines",
        "business", "productivity", "tools", "books and reference",
        "libraries and demo", "libraries and demos",
    }),
    "social": frozenset({
        "communication", "food and drink", "social", "shopping", "dating",
        "events", "weather", "maps and navigation", "auto and vehicles",
    }),
    "medical": frozenset({"health and fitness", "medical"}),
    "lifestyle": frozenset({
        "personalization", "sports", "music and audio", "entertainment",
        "travel and local", "lifestyle", "photography", "video players",
        "video players and editors", "parenting", "comics", "art and design",
        "beauty", "house and home",
    }),
}

OUTCOMES = (
    "log_price", "log_installs", "offers_iap", "contains_ads",
    "app_death", "change_to_tier1", "change_to_top_firm", "merger_acquisition",
)
CONTROLS = ("log_reviews", "days_since_launch", "rating", "size_mb", "adult")
CONTINUOUS_VARIABLES = (
    "niche", "log_price", "log_installs", "log_reviews", "rating",
    "days_since_launch", "size_mb",
)
DUMMY_VARIABLES = (
    "adult", "offers_iap", "contains_ads", "top_firm", "market_leader",
    "app_death", "change_to_tier1", "change_to_top_firm", "merger_acquisition",
) + CATEGORIES

# DerivedRow: one analysis row per retained (app, month)
DERIVED_ROW = (
    "app_id", "month", "wave_date", "niche", "log_price", "log_installs",
    "log_reviews", "rating", "days_since_launch", "size_mb", "adult",
    "offers_iap", "contains_ads", "category", "tier", "top_firm",
    "market_leader", "period", "app_death", "change_to_tier1",
    "change_to_top_firm", "merger_acquisition",
)


class AppRecord(BaseModel):
    """One app-month observation. Absent = key omitted or null."""

    model_config = ConfigDict(extra="ignore")

    app_id: str = Field(min_length=1)
    month: int = Field(ge=0)
    scraped: bool
    description: Optional[str] = None
    price: Optional[float] = Field(None, ge=0)
    installs_lb: Optional[int] = Field(None, ge=0)
    contains_ads: Optional[bool] = None
    offers_iap: Optional[bool] = None
    rating: Optional[float] = Field(None, ge=0, le=5)
    reviews: Optional[int] = Field(None, ge=0)
    released: Optional[date] = None
    size_mb: Optional[float] = Field(None, gt=0)
    adult: Optional[bool] = None
    genre_id: Optional[str] = None
    firm: Optional[str] = None


@dataclass(frozen=True)
class PanelDataset:
    """
    The app x month panel. `frame` holds one row per (app_id, month) for
    months 0..T-1, sorted by app_id then month; `flagged` maps app_id to the
    first deletion reason raised by imputation.
    """

    frame: pd.DataFrame
    wave_dates: Mapping[int, date] = field(default_factory=lambda: dict(DEFAULT_WAVE_DATES))
    top_firms: FrozenSet[str] = frozenset()
    flagged: Mapping[str, str] = field(default_factory=dict)

    @property
    def app_ids(self) -> List[str]:
        return list(pd.unique(self.frame["app_id"]))

    @property
    def n_apps(self) -> int:
        return int(self.frame["app_id"].nunique())

    @property
    def n_months(self) -> int:
        return 0 if self.frame.empty else int(self.frame["month"].max()) + 1

    def with_frame(self, frame: pd.DataFrame, flagged: Optional[Mapping[str, str]] = None) -> "PanelDataset":
        return replace(self, frame=frame, flagged=dict(self.flagged if flagged is None else flagged))


# ==============================================================================
# 🐰 RABBIT CORPUS CLASS
# ==============================================================================

class RabbitCorpus:
    """
    Intake, imputation and variable derivation for the app panel.
    """

    # ==========================================================================
    # 📥 INGEST
    # ==========================================================================

    @staticmethod
    def ingest_jsonl(
        path: Union[str, Path],
        wave_dates: Optional[Mapping[int, date]] = None,
        top_firms: Iterable[str] = (),
    ) -> PanelDataset:
        """
        Parses one JSON object per line into a rectangular panel.

        Blank lines and lines starting with '#' are skipped. Missing
        (app, month) cells become scraped=false rows with every field absent.
        Apps not scraped in month 0 are dropped.
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise DataSlip(f"cannot read {path}: {exc}") from exc
        return RabbitCorpus.parse_lines(enumerate(text.splitlines(), start=1), wave_dates, top_firms)

    @staticmethod
    def parse_lines(
        numbered_lines: Iterable[Tuple[int, str]],
        wave_dates: Optional[Mapping[int, date]] = None,
        top_firms: Iterable[str] = (),
    ) -> PanelDataset:
        records: List[dict] = []
        seen = set()
        for number, raw in numbered_lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseSlip(number, exc.msg) from exc
            if not isinstance(payload, dict):
                raise ParseSlip(number, "expected a JSON object")
            try:
                record = AppRecord.model_validate(payload)
            except ValidationError as exc:
                first = exc.errors()[0]
                where = ".".join(str(part) for part in first.get("loc", ()))
                raise ParseSlip(number, f"{where}: {first.get('msg')}") from exc
            key = (record.app_id, record.month)
            if key in seen:
                raise DataSlip(f"duplicate (app_id, month) {key} at line {number}", {"line": number})
            seen.add(key)
            records.append(record.model_dump())

        frame = pd.DataFrame.from_records(records, columns=list(RECORD_FIELDS))
        n_months = 0 if frame.empty else int(frame["month"].max()) + 1
        waves = RabbitCorpus._checked_waves(wave_dates, n_months)

        frame = RabbitCorpus._rectangularize(frame, n_months)
        month0 = frame[(frame["month"] == 0) & frame["scraped"]]["app_id"]
        absent = sorted(set(frame["app_id"]) - set(month0))
        if absent:
            Bananas.notify("WARNING", f"{len(absent)} app(s) not scraped in month 0 dropped", apps=absent[:20])
            frame = frame[frame["app_id"].isin(set(month0))].reset_index(drop=True)

        panel = PanelDataset(frame=frame, wave_dates=waves, top_firms=frozenset(top_firms))
        MonkeyHeart.log_numeric_event("INGEST", {"records": len(records), "apps": panel.n_apps, "months": n_months})
        return panel

    @staticmethod
    def _checked_waves(wave_dates: Optional[Mapping[int, date]], n_months: int) -> Dict[int, date]:
        waves = dict(DEFAULT_WAVE_DATES if wave_dates is None else wave_dates)
        missing = [m for m in range(n_months) if m not in waves]
        if missing:
            raise DataSlip(f"no wave date for month(s) {missing[:5]}")
        ordered = [waves[m] for m in sorted(waves)]
        if any(b <= a for a, b in zip(ordered, ordered[1:])):
            raise DataSlip("wave dates must be strictly increasing")
        return waves

    @staticmethod
    def _rectangularize(frame: pd.DataFrame, n_months: int) -> pd.DataFrame:
        if frame.empty:
            return RabbitCorpus._typed(frame)
        apps = sorted(frame["app_id"].unique())
        grid = pd.MultiIndex.from_product([apps, range(n_months)], names=["app_id", "month"])
        frame = frame.set_index(["app_id", "month"]).reindex(grid).reset_index()
        frame["scraped"] = frame["scraped"].fillna(False)
        return RabbitCorpus._typed(frame)

    @staticmethod
    def _typed(frame: pd.DataFrame) -> pd.DataFrame:
        frame = frame.loc[:, list(RECORD_FIELDS)].copy()
        for column, dtype in PANEL_DTYPES.items():
            frame[column] = frame[column].astype(object).where(frame[column].notna(), None).astype(dtype)
        frame["released"] = pd.to_datetime(frame["released"])
        return frame.reset_index(drop=True)

    @staticmethod
    def load_top_firms(path: Union[str, Path]) -> FrozenSet[str]:
        """One firm name per line, UTF-8. Lines starting with '#' are comments."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return frozenset(line.strip() for line in lines if line.strip() and not line.startswith("#"))

    @staticmethod
    def load_wave_dates(path: Union[str, Path]) -> Dict[int, date]:
        """CSV with columns month,date."""
        table = pd.read_csv(path, comment="#")
        if not {"month", "date"} <= set(table.columns):
            raise DataSlip(f"{path}: expected columns month,date")
        waves = {int(m): pd.Timestamp(d).date() for m, d in zip(table["month"], table["date"])}
        return RabbitCorpus._checked_waves(waves, len(waves))

    @staticmethod
    def panel_to_lines(panel: PanelDataset) -> List[str]:
        """The panel back in the input record schema, one JSON object per row."""
        frame = panel.frame.astype(object)
        frame = frame.where(panel.frame.notna(), None)
        lines = []
        for record in frame.to_dict("records"):
            if record["released"] is not None:
                record["released"] = pd.Timestamp(record["released"]).date().isoformat()
            for key in ("month", "installs_lb", "reviews"):
                if record[key] is not None:
                    record[key] = int(record[key])
            for key in ("price", "rating", "size_mb"):
                if record[key] is not None:
                    record[key] = float(record[key])
            for key in ("scraped", "contains_ads", "offers_iap", "adult"):
                if record[key] is not None:
                    record[key] = bool(record[key])
            lines.append(json.dumps(record, ensure_ascii=False))
        return lines

    # ==========================================================================
    # 🩹 IMPUTATION
    # ==========================================================================

    @staticmethod
    def impute_stable(panel: PanelDataset) -> PanelDataset:
        """
        Fills stable variables from the app's own non-missing months: mode for
        discrete ones (ties -> smallest value), mean for continuous ones
        (reviews rounded half-up to an integer). Apps with a variable absent
        in every month are flagged for deletion.
        """
        frame = panel.frame.copy()
        keys = frame["app_id"]
        flags: Dict[str, str] = {}

        for column in STABLE_DISCRETE + STABLE_CONTINUOUS:
            RabbitCorpus._flag_all_absent(frame, column, flags)

        for column in STABLE_DISCRETE:
            frame[column] = RabbitCorpus._fill_with_mode(frame[column], keys)

        for column in STABLE_CONTINUOUS:
            means = frame.groupby("app_id", sort=False)[column].transform("mean")
            if column == "reviews":
                # half-up: 12.5 -> 13
                means = np.floor(means + 0.5).astype("Int64")
            frame[column] = frame[column].fillna(means).astype(frame[column].dtype)

        return panel.with_frame(frame, RabbitCorpus._merge_flags(panel.flagged, flags))

    @staticmethod
    def impute_locf(panel: PanelDataset) -> PanelDataset:
        """
        Carries the last earlier observation forward for installs, price and
        firm. Leading absences are never back-filled: an app whose value is
        absent at month 0 is flagged for deletion.
        """
        frame = panel.frame.copy()
        flags: Dict[str, str] = {}
        month0 = frame[frame["month"] == 0].set_index("app_id")
        for column in LOCF_FIELDS:
            for app_id in month0.index[month0[column].isna()]:
                flags.setdefault(app_id, f"{column} absent at month 0")
            frame[column] = frame.groupby("app_id", sort=False)[column].ffill().astype(frame[column].dtype)
        return panel.with_frame(frame, RabbitCorpus._merge_flags(panel.flagged, flags))

    @staticmethod
    def impute_monetization_flags(panel: PanelDataset) -> PanelDataset:
        """
        Ads / in-app purchase flags, three rules in order:
        one observed value fills every gap; month 0 still absent becomes
        false; whatever is left is carried forward.
        """
        frame = panel.frame.copy()
        for column in MONETIZATION_FLAGS:
            frame[column] = (
                frame.groupby("app_id", sort=False)[column]
                .transform(_fill_monetization_flag)
                .astype("boolean")
            )
        return panel.with_frame(frame)

    @staticmethod
    def drop_flagged(panel: PanelDataset) -> Tuple[PanelDataset, pd.DataFrame]:
        """Removes flagged apps. Returns the retained panel and (app_id, reason) rows."""
        deleted = pd.DataFrame(
            sorted(panel.flagged.items()), columns=["app_id", "reason"]
        )
        keep = ~panel.frame["app_id"].isin(set(panel.flagged))
        frame = panel.frame[keep].reset_index(drop=True)
        if len(deleted):
            MonkeyHeart.log_numeric_event("DELETE", {"apps_deleted": len(deleted), "apps_kept": frame["app_id"].nunique()})
        return panel.with_frame(frame, {}), deleted

    @staticmethod
    def _flag_all_absent(frame: pd.DataFrame, column: str, flags: Dict[str, str]) -> None:
        observed = frame[column].notna().groupby(frame["app_id"], sort=False).any()
        for app_id in observed.index[~observed]:
            flags.setdefault(app_id, f"{column} absent in all months")

    @staticmethod
    def _fill_with_mode(series: pd.Series, keys: pd.Series) -> pd.Series:
        observed = pd.DataFrame({"key": keys, "value": series}).dropna()
        if observed.empty:
            return series
        counts = observed.groupby(["key", "value"], sort=True).size().rename("n").reset_index()
        counts = counts.sort_values(["key", "n"], ascending=[True, False], kind="stable")
        modes = counts.drop_duplicates("key").set_index("key")["value"]
        filled = series.astype(object).where(series.notna(), keys.map(modes))
        if pd.api.types.is_datetime64_any_dtype(series.dtype):
            return pd.to_datetime(filled)
        return filled.astype(series.dtype)

    @staticmethod
    def _merge_flags(existing: Mapping[str, str], new: Mapping[str, str]) -> Dict[str, str]:
        merged = dict(existing)
        for app_id in sorted(new):
            merged.setdefault(app_id, new[app_id])
        return merged

    # ==========================================================================
    # 🏷️ CLASSIFICATION
    # ==========================================================================

    @staticmethod
    def detect_app_death(panel: PanelDataset) -> pd.Series:
        """
        True from the first month of an unbroken run of failed scrapes that
        lasts to the end of the panel.
        """
        frame = panel.frame
        scraped = frame["scraped"].astype(bool)
        reversed_keys = frame["app_id"].iloc[::-1]
        seen_later = scraped.astype(int).iloc[::-1].groupby(reversed_keys, sort=False).cummax() > 0
        return (~seen_later.reindex(frame.index).astype(bool)).rename("app_death")

    @staticmethod
    def map_genre_to_category(genre_id: str) -> str:
        """Store genre id -> game | business | social | medical | lifestyle."""
        if genre_id is None or not str(genre_id).strip():
            raise DataSlip("genre_id must be a nonempty string")
        name = str(genre_id).strip().lower().replace("_", " ").replace("&", "and")
        name = " ".join(name.split())
        if name.startswith("game") or name in GAME_GENRES:
            return "game"
        for category, genres in GENRE_GROUPS.items():
            if name in genres:
                return category
        Bananas.notify("WARNING", f"unknown genre '{genre_id}' mapped to {BASELINE_CATEGORY}")
        return BASELINE_CATEGORY

    @staticmethod
    def assign_tiers(installs_lb):
        """
        Tier 1: >= 10M installs, tier 2: [100K, 10M), tier 3 otherwise.
        Accepts a scalar or an array-like.
        """
        if np.ndim(installs_lb) == 0:
            value = float(installs_lb)
            return 1 if value >= TIER1_FLOOR else 2 if value >= TIER2_FLOOR else 3
        values = pd.Series(installs_lb).to_numpy(dtype=float, na_value=np.nan)
        return np.where(values >= TIER1_FLOOR, 1, np.where(values >= TIER2_FLOOR, 2, 3))

    @staticmethod
    def flag_market_leader(tier, firm, top_firms: Iterable[str]):
        """tier == 1 or firm in top_firms. Scalar or vectorized."""
        firms = frozenset(top_firms)
        if np.ndim(tier) == 0:
            return bool(tier == 1 or (firm is not None and not pd.isna(firm) and firm in firms))
        in_top = pd.Series(firm, dtype="string").isin(firms).fillna(False).to_numpy(dtype=bool)
        return (np.asarray(tier) == 1) | in_top

    @staticmethod
    def period_of(wave: date) -> str:
        """Latest period whose window starts on or before the wave date."""
        label = PERIODS[0]
        for name, start in PERIOD_STARTS:
            if wave >= start:
                label = name
        return label

    # ==========================================================================
    # 🧮 DERIVED ROWS
    # ==========================================================================

    @staticmethod
    def derive_variables(
        panel: PanelDataset,
        niche_index: Union[Mapping[str, float], pd.Series],
        wave_dates: Optional[Mapping[int, date]] = None,
        anchor_date: date = date(2021, 8, 13),
    ) -> pd.DataFrame:
        """
        Builds one analysis row (DERIVED_ROW columns) per retained (app, month).
        Apps without a niche score (filtered out by text preparation) are left out.
        """
        waves = dict(wave_dates or panel.wave_dates)
        niche = pd.Series(niche_index, dtype=float)
        retained = panel.frame[~panel.frame["app_id"].isin(set(panel.flagged))]
        death = RabbitCorpus.detect_app_death(panel).loc[retained.index]

        unscored = set(retained["app_id"]) - set(niche.index)
        if unscored:
            Bananas.notify("INFO", f"{len(unscored)} app(s) without a niche score left out of the analysis rows")
        keep = retained["app_id"].isin(set(niche.index))
        frame = retained[keep].reset_index(drop=True)
        death = death[keep.to_numpy()].reset_index(drop=True)

        rows = pd.DataFrame({"app_id": frame["app_id"].astype(str), "month": frame["month"].astype(int)})
        wave = rows["month"].map(waves)
        rows["wave_date"] = wave.map(lambda d: d.isoformat())
        rows["niche"] = rows["app_id"].map(niche)
        rows["log_price"] = np.log(_floats(frame["price"]) + 1.0)
        rows["log_installs"] = np.log(_floats(frame["installs_lb"]) + 1.0)
        rows["log_reviews"] = np.log(_floats(frame["reviews"]) + 1.0)
        rows["rating"] = _floats(frame["rating"])

        released = pd.to_datetime(frame["released"])
        days = (pd.Timestamp(anchor_date) - released).dt.days
        late = (released > pd.to_datetime(wave)) | (days < 0)
        if late.any():
            Bananas.notify("WARNING", f"{int(late.sum())} row(s) released after their wave date; days_since_launch floored at 0")
        rows["days_since_launch"] = days.mask(late, 0).clip(lower=0).astype("Int64")
        rows["size_mb"] = _floats(frame["size_mb"])
        rows["adult"] = frame["adult"].fillna(False).astype(bool)
        rows["offers_iap"] = frame["offers_iap"].fillna(False).astype(bool)
        rows["contains_ads"] = frame["contains_ads"].fillna(False).astype(bool)

        # category comes from the app's modal genre, not the row's
        genre_mode = frame.groupby("app_id", sort=False)["genre_id"].agg(_modal_value)
        categories = {
            app_id: RabbitCorpus.map_genre_to_category(genre) if isinstance(genre, str) else BASELINE_CATEGORY
            for app_id, genre in genre_mode.items()
        }
        rows["category"] = rows["app_id"].map(categories)

        rows["tier"] = RabbitCorpus.assign_tiers(frame["installs_lb"])
        rows["top_firm"] = frame["firm"].isin(panel.top_firms).fillna(False).astype(bool).to_numpy()
        rows["market_leader"] = RabbitCorpus.flag_market_leader(rows["tier"].to_numpy(), frame["firm"], panel.top_firms)
        rows["period"] = wave.map(RabbitCorpus.period_of)
        rows["app_death"] = death.astype(bool).to_numpy()

        by_app = rows.groupby("app_id", sort=False)
        first = by_app.cumcount() == 0
        prev_tier = by_app["tier"].shift(1)
        prev_top = by_app["top_firm"].shift(1)
        firm = frame["firm"]
        prev_firm = firm.groupby(frame["app_id"], sort=False).shift(1)
        rows["change_to_tier1"] = (~first) & (rows["tier"] == 1) & (prev_tier != 1)
        rows["change_to_top_firm"] = (~first) & rows["top_firm"] & prev_top.eq(False)
        rows["merger_acquisition"] = (~first) & (firm != prev_firm).fillna(False).astype(bool).to_numpy()

        MonkeyHeart.log_numeric_event("DERIVE", {"rows": len(rows), "apps": rows["app_id"].nunique()})
        return rows.loc[:, list(DERIVED_ROW)]

    # ==========================================================================
    # 📊 DESCRIPTIVE STATISTICS
    # ==========================================================================

    @staticmethod
    def cross_section(rows: pd.DataFrame, month: Optional[int] = None) -> pd.DataFrame:
        """Rows of one month (default: the last month present)."""
        if rows.empty:
            return rows
        month = int(rows["month"].max()) if month is None else month
        return rows[rows["month"] == month].reset_index(drop=True)

    @staticmethod
    def sample_groups(rows: pd.DataFrame, grouping: str = "sample") -> List[Tuple[str, pd.DataFrame]]:
        """
        grouping "sample": FULL, ML, MF. "all": FULL only. Any other column
        name: FULL plus one group per value of that column.
        """
        groups = [("FULL", rows)]
        if grouping == "all":
            return groups
        if grouping == "sample":
            leader = rows["market_leader"].astype(bool)
            return groups + [("ML", rows[leader]), ("MF", rows[~leader])]
        values = CATEGORIES if grouping == "category" else sorted(pd.unique(rows[grouping].dropna()))
        return groups + [(str(v), rows[rows[grouping] == v]) for v in values]

    @staticmethod
    def summarize(
        rows: pd.DataFrame,
        grouping: str = "sample",
        continuous: Sequence[str] = CONTINUOUS_VARIABLES,
        dummies: Sequence[str] = DUMMY_VARIABLES,
    ) -> pd.DataFrame:
        """
        Long table: group, variable, kind, count, mean, std (n-1), min,
        median, max, pct_true. Empty groups give a row of absent values.
        """
        if rows.empty:
            raise DataSlip("summarize needs at least one row")
        table = []
        for group, sub in RabbitCorpus.sample_groups(rows, grouping):
            for variable in continuous:
                if variable not in sub.columns:
                    continue
                values = pd.to_numeric(sub[variable], errors="coerce").dropna().astype(float)
                stats = dict(group=group, variable=variable, kind="continuous", count=len(values))
                if len(values):
                    stats.update(
                        mean=values.mean(), std=values.std(ddof=1), min=values.min(),
                        median=values.median(), max=values.max(), pct_true=np.nan,
                    )
                else:
                    stats.update(mean=np.nan, std=np.nan, min=np.nan, median=np.nan, max=np.nan, pct_true=np.nan)
                table.append(stats)
            for variable in dummies:
                if variable in CATEGORIES:
                    values = (sub["category"] == variable) if "category" in sub.columns else None
                elif variable in sub.columns:
                    values = sub[variable].astype(bool)
                else:
                    values = None
                if values is None:
                    continue
                pct = 100.0 * float(values.mean()) if len(values) else np.nan
                table.append(dict(
                    group=group, variable=variable, kind="dummy", count=len(values),
                    mean=np.nan, std=np.nan, min=np.nan, median=np.nan, max=np.nan, pct_true=pct,
                ))
        return pd.DataFrame(table, columns=[
            "group", "variable", "kind", "count", "mean", "std", "min", "median", "max", "pct_true",
        ])

    @staticmethod
    def sample_counts(rows: pd.DataFrame, month: Optional[int] = None) -> pd.DataFrame:
        """App counts per category for FULL / ML / MF in one cross-section."""
        section = RabbitCorpus.cross_section(rows, month)
        leader = section["market_leader"].astype(bool)
        table = []
        for category in CATEGORIES + ("total",):
            mask = np.ones(len(section), dtype=bool) if category == "total" else (section["category"] == category).to_numpy()
            table.append({
                "category": category,
                "FULL": int(mask.sum()),
                "ML": int((mask & leader.to_numpy()).sum()),
                "MF": int((mask & ~leader.to_numpy()).sum()),
            })
        return pd.DataFrame(table)

    @staticmethod
    def raw_complete_cases(panel: PanelDataset, month: Optional[int] = None) -> pd.DataFrame:
        """Raw (unimputed) variables of one month, rows with any gap removed."""
        frame = panel.frame
        month = int(frame["month"].max()) if month is None else month
        section = frame[(frame["month"] == month) & frame["scraped"]]
        raw = pd.DataFrame({
            "app_id": section["app_id"].astype(str).to_numpy(),
            "log_price": np.log(_floats(section["price"]) + 1.0),
            "log_installs": np.log(_floats(section["installs_lb"]) + 1.0),
            "log_reviews": np.log(_floats(section["reviews"]) + 1.0),
            "rating": _floats(section["rating"]),
            "size_mb": _floats(section["size_mb"]),
        })
        return raw.dropna().reset_index(drop=True)

    @staticmethod
    def correlation_matrix(rows: pd.DataFrame, variables: Sequence[str]) -> pd.DataFrame:
        """
        Pearson correlations over complete rows. Zero-variance variables
        correlate 0 with everything else; the diagonal is exactly 1.
        """
        variables = list(variables)
        data = rows[variables].apply(pd.to_numeric, errors="coerce").astype(float).dropna().to_numpy()
        if data.shape[0] < 2:
            raise DataSlip("correlation needs at least two complete rows")

        centered = data - data.mean(axis=0)
        scale = np.sqrt((centered ** 2).sum(axis=0))
        flat = scale == 0
        if flat.any():
            names = [v for v, f in zip(variables, flat) if f]
            Bananas.notify("WARNING", f"zero-variance variable(s) {names}; correlations set to 0")
        safe = np.where(flat, 1.0, scale)
        corr = (centered.T @ centered) / np.outer(safe, safe)
        corr[flat, :] = 0.0
        corr[:, flat] = 0.0
        corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
        np.fill_diagonal(corr, 1.0)
        return pd.DataFrame(corr, index=variables, columns=variables)


def _fill_monetization_flag(series: pd.Series) -> pd.Series:
    values = series.astype("boolean")
    observed = values.dropna().unique()
    if len(observed) == 1:
        values = values.fillna(bool(observed[0]))
    if len(values) and pd.isna(values.iloc[0]):
        values.iloc[0] = False
    return values.ffill()


def _modal_value(series: pd.Series):
    observed = series.dropna()
    return None if observed.empty else observed.mode().iloc[0]


def _floats(series: pd.Series) -> np.ndarray:
    return pd.Series(series).to_numpy(dtype=float, na_value=np.nan)


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🐰 RABBIT CORPUS V8.0 DIAGNOSTIC\n" + "=" * 40)

    lines = [
        {"app_id": "a", "month": 0, "scraped": True, "rating": 4.0, "contains_ads": None, "price": 0.99},
        {"app_id": "a", "month": 1, "scraped": True, "rating": None, "contains_ads": True, "price": None},
        {"app_id": "a", "month": 2, "scraped": True, "rating": 4.4, "contains_ads": False, "price": None},
    ]
    demo = RabbitCorpus.parse_lines(enumerate((json.dumps(x) for x in lines), start=1))

    print("\n[TEST 1] Mean imputation of rating...")
    print(f" > {list(RabbitCorpus.impute_stable(demo).frame['rating'])}")

    print("\n[TEST 2] Monetization flag rules...")
    print(f" > {list(RabbitCorpus.impute_monetization_flags(demo).frame['contains_ads'])}")

    print("\n[TEST 3] LOCF price...")
    print(f" > {list(RabbitCorpus.impute_locf(demo).frame['price'])}")

    print("\n[TEST 4] Genres...")
    print(f" > dating={RabbitCorpus.map_genre_to_category('dating')} GAME_ACTION={RabbitCorpus.map_genre_to_category('GAME_ACTION')}")

    print("\n" + "=" * 40)
    print("🐰 RABBIT CORPUS SYSTEM: OPERATIONAL")
