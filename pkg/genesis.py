"""
GENESIS V8.0
The Synthetic Panel Generator for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Seeds a synthetic app panel with known ground truth so every stage of the
pipeline can be checked against the answer it should find: descriptions drawn
from per-topic word pools (recoverable clusters of unequal size), a planted
niche -> log(price + 1) coefficient, and controlled scraper damage (missing
fields, failed scrapes, dead apps, apps missing installs in month 0, apps
missing their monetization flags in month 0, apps missing one stable field
in every month).

CORE CAPABILITIES:
1. SyntheticSpec (validated counts, rates and planted effects).
2. generate(): JSONL records + top-firm list + manifest, deterministic per seed.
3. ignite(): writes the three files through the Monkey Brain.
"""

import hashlib
import json
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from monkey_brain import MonkeyBrain
from monkey_heart import MonkeyHeart
from rabbit_corpus import DEFAULT_WAVE_DATES, MONETIZATION_FLAGS


TOPIC_POOLS = (
    ("rain", "storm", "forecast", "cloud", "thunder", "humid", "breeze", "radar", "snow",
     "frost", "sunny", "wind", "temperature", "climate", "drizzle", "hail", "barometer",
     "tornado", "hurricane", "celsius", "fahrenheit", "lightning", "monsoon", "blizzard", "umbrella"),
    ("workout", "muscle", "cardio", "yoga", "calorie", "protein", "stretch", "squat",
     "treadmill", "jogging", "coach", "pushup", "marathon", "pilates", "sweat", "endurance",
     "kettlebell", "dumbbell", "posture", "hydration", "lunge", "abdomen", "flexibility", "bicep", "sprint"),
    ("budget", "invoice", "expense", "savings", "loan", "mortgage", "interest", "ledger",
     "payroll", "dividend", "stock", "portfolio", "currency", "receipt", "accountant", "tax",
     "credit", "debit", "wallet", "banking", "investor", "bond", "equity", "audit", "refund"),
    ("jigsaw", "riddle", "maze", "tile", "level", "block", "brain", "sudoku", "crossword",
     "match", "gem", "candy", "swap", "combo", "board", "logic", "hint", "shuffle", "solver",
     "piece", "chess", "domino", "clue", "tetromino", "bubble"),
    ("recipe", "kitchen", "bake", "oven", "ingredient", "grill", "pasta", "salad", "soup",
     "dessert", "flour", "sauce", "spice", "roast", "vegetarian", "breakfast", "dinner", "chef",
     "cuisine", "noodle", "steak", "pastry", "garlic", "butter", "simmer"),
    ("flight", "hotel", "passport", "luggage", "airport", "booking", "itinerary", "destination",
     "cruise", "tourist", "resort", "beach", "hostel", "visa", "sightseeing", "backpack",
     "ticket", "journey", "map", "guide", "landmark", "museum", "vacation", "island", "train"),
)
# shared filler, frequent enough to fall above the df ceiling
COMMON_POOL = ("app", "free", "easy", "best", "new", "download", "simple", "fun")
TOPIC_WORD_SHARE = 0.7

GENRES = (
    "GAME_PUZZLE", "GAME_ACTION", "BUSINESS", "FINANCE", "TOOLS", "SOCIAL",
    "COMMUNICATION", "MEDICAL", "HEALTH_AND_FITNESS", "LIFESTYLE", "ENTERTAINMENT",
)
INSTALL_BRACKETS = (1_000, 10_000, 100_000, 1_000_000, 10_000_000, 100_000_000)
INSTALL_WEIGHTS = (0.20, 0.25, 0.25, 0.18, 0.08, 0.04)
RELEASE_WINDOW = (date(2012, 1, 1), date(2019, 6, 30))
# stable fields a scraper can miss for good
ABSENT_FIELDS = ("size_mb", "rating", "released", "genre_id", "adult")


class SyntheticSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_apps: int = Field(300, ge=4)
    n_months: int = Field(len(DEFAULT_WAVE_DATES), ge=1, le=len(DEFAULT_WAVE_DATES))
    n_topics: int = Field(3, ge=1, le=len(TOPIC_POOLS))
    topic_shares: Optional[Tuple[float, ...]] = None
    min_doc_words: int = Field(30, ge=1)
    max_doc_words: int = Field(80, ge=1)
    n_firms: int = Field(40, ge=1)
    n_top_firms: int = Field(3, ge=0)

    intercept: float = 1.0
    beta_niche: float = -0.3
    beta_log_reviews: float = 0.05
    noise_sd: float = Field(0.15, ge=0.0)

    missing_rate: float = Field(0.0, ge=0.0, le=1.0)
    gap_rate: float = Field(0.0, ge=0.0, le=1.0)
    death_rate: float = Field(0.0, ge=0.0, le=1.0)
    deletion_rate: float = Field(0.0, ge=0.0, le=1.0)
    short_rate: float = Field(0.0, ge=0.0, le=1.0)
    flag_gap_rate: float = Field(0.0, ge=0.0, le=1.0)
    absent_rate: float = Field(0.0, ge=0.0, le=1.0)
    seed: int = Field(0, ge=0)

    @field_validator("topic_shares", mode="before")
    @classmethod
    def _split_shares(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "SyntheticSpec":
        if self.min_doc_words > self.max_doc_words:
            raise ValueError("min_doc_words must be <= max_doc_words")
        if self.n_top_firms > self.n_firms:
            raise ValueError("n_top_firms must be <= n_firms")
        if self.topic_shares is not None:
            if len(self.topic_shares) != self.n_topics:
                raise ValueError("topic_shares needs one share per topic")
            if any(s <= 0 for s in self.topic_shares) or abs(sum(self.topic_shares) - 1.0) > 1e-9:
                raise ValueError("topic_shares must be positive and sum to 1")
        return self

    def shares(self) -> np.ndarray:
        if self.topic_shares is not None:
            return np.asarray(self.topic_shares, dtype=float)
        # unequal by default (weights n+1, n, ..., 2) so the niche index has spread
        weights = np.arange(self.n_topics, 0, -1, dtype=float) + 1.0
        return weights / weights.sum()

    def fingerprint(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class SyntheticCorpus:
    lines: List[str]
    top_firms: List[str]
    manifest: Dict[str, Any]


class GenesisProtocol:
    """
    GENESIS: THE BIG BANG.
    Builds a panel whose answers are known before the pipeline runs.
    """

    @staticmethod
    def _topic_sizes(spec: SyntheticSpec) -> np.ndarray:
        raw = spec.shares() * spec.n_apps
        sizes = np.floor(raw).astype(int)
        # largest remainders take the leftover apps
        leftover = spec.n_apps - int(sizes.sum())
        order = np.argsort(-(raw - sizes), kind="stable")
        sizes[order[:leftover]] += 1
        return sizes

    @staticmethod
    def _description(rng: np.random.Generator, topic: int, n_words: int) -> str:
        pool = TOPIC_POOLS[topic]
        from_topic = rng.random(n_words) < TOPIC_WORD_SHARE
        words = [
            pool[rng.integers(len(pool))] if pick else COMMON_POOL[rng.integers(len(COMMON_POOL))]
            for pick in from_topic
        ]
        return " ".join(words).capitalize() + "."

    @staticmethod
    def generate(spec: SyntheticSpec) -> SyntheticCorpus:
        rng = np.random.default_rng(spec.seed)
        n, months = spec.n_apps, spec.n_months
        app_ids = [f"app{i:05d}" for i in range(n)]

        sizes = GenesisProtocol._topic_sizes(spec)
        topics = rng.permutation(np.repeat(np.arange(spec.n_topics), sizes))

        short = rng.random(n) < spec.short_rate
        deleted = rng.random(n) < spec.deletion_rate
        scored = ~short & ~deleted
        counts = np.bincount(topics[scored], minlength=spec.n_topics)
        niche_true = np.where(scored, 1.0 - counts[topics] / max(int(counts.max()), 1), np.nan)

        firms = [f"Studio {j:02d}" for j in range(spec.n_firms)]
        top_firms = firms[: spec.n_top_firms]
        released_span = (RELEASE_WINDOW[1] - RELEASE_WINDOW[0]).days

        dies = (rng.random(n) < spec.death_rate) & (months > 1)
        death_month = np.where(dies, rng.integers(1, max(months, 2), size=n), months)

        # separate stream; the main draws do not depend on these rates
        damage = np.random.default_rng([spec.seed, 1])
        flag_gap = damage.random(n) < spec.flag_gap_rate
        absent = damage.random(n) < spec.absent_rate
        absent_field = [ABSENT_FIELDS[j] for j in damage.integers(len(ABSENT_FIELDS), size=n)]

        lines: List[str] = []
        for i, app_id in enumerate(app_ids):
            if short[i]:
                description = " ".join(TOPIC_POOLS[topics[i]][:3])
            else:
                n_words = int(rng.integers(spec.min_doc_words, spec.max_doc_words + 1))
                description = GenesisProtocol._description(rng, int(topics[i]), n_words)
            installs = int(rng.choice(INSTALL_BRACKETS, p=INSTALL_WEIGHTS))
            static = {
                "description": description,
                "installs_lb": installs,
                "contains_ads": bool(rng.random() < 0.5),
                "offers_iap": bool(rng.random() < 0.4),
                "rating": round(float(rng.uniform(3.0, 5.0)), 1),
                "released": (RELEASE_WINDOW[0] + timedelta(days=int(rng.integers(released_span)))).isoformat(),
                "size_mb": round(float(rng.lognormal(3.0, 0.6)), 2),
                "adult": bool(rng.random() < 0.1),
                "genre_id": GENRES[rng.integers(len(GENRES))],
                "firm": firms[rng.integers(len(firms))],
            }
            review_base = installs * float(rng.uniform(0.005, 0.02))
            gaps = rng.random(months) < spec.gap_rate
            blanks = rng.random((months, len(static) + 2)) < spec.missing_rate
            noise = rng.normal(0.0, spec.noise_sd, size=months)

            for month in range(months):
                if month >= death_month[i] or (month > 0 and gaps[month]):
                    lines.append(json.dumps({"app_id": app_id, "month": month, "scraped": False}))
                    continue
                reviews = int(round(review_base * (1.0 + 0.02 * month)))
                niche = niche_true[i] if scored[i] else 0.0
                log_price = spec.intercept + spec.beta_niche * niche + spec.beta_log_reviews * np.log(reviews + 1.0) + noise[month]
                record = {
                    "app_id": app_id,
                    "month": month,
                    "scraped": True,
                    **static,
                    "reviews": reviews,
                    "price": round(max(float(np.expm1(log_price)), 0.0), 6),
                }
                if month > 0:
                    for key, blank in zip(list(static) + ["reviews", "price"], blanks[month]):
                        if blank:
                            record.pop(key)
                elif deleted[i]:
                    record.pop("installs_lb")
                if month == 0 and flag_gap[i]:
                    for key in MONETIZATION_FLAGS:
                        record.pop(key)
                if absent[i]:
                    record.pop(absent_field[i], None)
                lines.append(json.dumps(record))

        manifest = {
            "spec": spec.model_dump(mode="json"),
            "records": len(lines),
            "topic_sizes": sizes.tolist(),
            "topics": {a: int(t) for a, t in zip(app_ids, topics)},
            "niche_true": {a: float(v) for a, v in zip(app_ids, niche_true) if np.isfinite(v)},
            "planted": {
                "intercept": spec.intercept,
                "niche": spec.beta_niche,
                "log_reviews": spec.beta_log_reviews,
                "noise_sd": spec.noise_sd,
            },
            "dead_apps": {a: int(m) for a, m, d in zip(app_ids, death_month, dies) if d},
            "deleted_apps": [a for a, d in zip(app_ids, deleted) if d],
            "short_apps": [a for a, s in zip(app_ids, short) if s],
            "flag_gap_apps": [a for a, g in zip(app_ids, flag_gap) if g],
            "absent_fields": {a: f for a, f, x in zip(app_ids, absent_field, absent) if x},
            "top_firms": top_firms,
        }
        return SyntheticCorpus(lines, top_firms, manifest)

    @staticmethod
    def ignite(spec: SyntheticSpec, output_dir: Path) -> Dict[str, Path]:
        """Writes synthetic_panel.jsonl, top_firms.txt and synthetic_manifest.json."""
        corpus = GenesisProtocol.generate(spec)
        brain = MonkeyBrain(Path(output_dir), spec.fingerprint())
        written = {
            "panel": brain.write_lines("synthetic_panel.jsonl", corpus.lines),
            "top_firms": brain.write_lines("top_firms.txt", corpus.top_firms),
            "manifest": brain.write_json("synthetic_manifest.json", corpus.manifest),
        }
        MonkeyHeart.log_system_event(
            "GENESIS",
            f"Synthetic panel seeded: {spec.n_apps} apps x {spec.n_months} months",
            records=len(corpus.lines),
            topics=spec.n_topics,
        )
        return written


if __name__ == "__main__":
    print("--- INITIATING GENESIS PROTOCOL ---")
    sample = GenesisProtocol.generate(SyntheticSpec(n_apps=12, n_months=2, seed=1))
    print(f"GENESIS: {len(sample.lines)} records, topic sizes {sample.manifest['topic_sizes']}")
    print(sample.lines[0][:120])
    print("--- GENESIS COMPLETE. WELCOME TO THE NEW REALITY. ---")
