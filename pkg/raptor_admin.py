"""
RAPTOR ADMIN V8.0
The Configuration Module for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
This module is the control panel for the pipeline. Every tunable the
commands use lives in one frozen PipelineConfig. Values are layered:
model defaults, then a key=value config file, then path overrides from the
environment, then command-line flags. A config that fails validation stops
the command before any work happens.

CORE CAPABILITIES:
1. PipelineConfig (validated, immutable).
2. key=value config file loading.
3. Environment overrides (paths only).
4. Config hash stamped into every artifact.

INTEGRATIONS:
- Bananas (ConfigSlip)
- Monkey Heart (Logging)
"""

import hashlib
import json
import os
from datetime import date
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from bananas import ConfigSlip
from monkey_heart import MonkeyHeart


PATH_ENV_OVERRIDES = {
    "input": "NICHE_INPUT",
    "top_firms": "NICHE_TOP_FIRMS",
    "wave_dates": "NICHE_WAVE_DATES",
    "output_dir": "NICHE_OUTPUT_DIR",
}

# Fields that do not change what the artifacts contain.
HASH_EXCLUDED = {"output_dir", "workers"}


# ==============================================================================
# ⚙️ GLOBAL CONFIG (The Physics)
# ==============================================================================

class PipelineConfig(BaseModel):
    """
    Every tunable of the pipeline. Field names double as config-file keys and
    (kebab-cased) as command-line flags.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    # --- paths
    input: Optional[Path] = None
    top_firms: Optional[Path] = None
    wave_dates: Optional[Path] = None
    output_dir: Path = Path("niche_out")

    # --- text preparation
    min_words: int = Field(20, ge=1)
    max_words: int = Field(400, ge=1)
    threshold_min: float = Field(0.004, ge=0.0, le=1.0)
    threshold_max: float = Field(0.7, ge=0.0, le=1.0)
    idf_smooth: bool = False
    l2_normalize: bool = False
    dump_matrix: bool = False

    # --- reduction
    svd_ratio: float = Field(0.95, gt=0.0, le=1.0)
    svd_max_rank: Optional[int] = Field(None, ge=1)
    svd_center: bool = False

    # --- clustering
    k_coarse: Optional[List[int]] = None
    k_fine: Optional[List[int]] = None
    chosen_k: Optional[int] = Field(None, ge=2)
    k_alternatives: List[int] = Field(default_factory=list)
    n_restarts: int = Field(10, ge=1)
    max_iter: int = Field(300, ge=1)
    tol: float = Field(1e-6, gt=0.0)
    audit_clusters: int = Field(1, ge=1)
    audit_docs: int = Field(2, ge=1)

    # --- econometrics
    anchor_date: date = date(2021, 8, 13)
    se_mode: Literal["classical", "hc1", "cluster"] = "classical"
    star_thresholds: Tuple[float, float, float] = (0.10, 0.05, 0.01)
    near_tie_margin: float = Field(2.0, ge=0.0)

    # --- run
    seed: int = 0
    workers: int = Field(1, ge=1)

    @field_validator("k_coarse", "k_fine", "k_alternatives", "star_thresholds", mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("k_coarse", "k_fine", "k_alternatives")
    @classmethod
    def _k_grid_ascending(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is None:
            return value
        if any(k < 2 for k in value):
            raise ValueError("every k must be >= 2")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("k grid must be strictly ascending")
        return value

    @field_validator("star_thresholds")
    @classmethod
    def _stars_descending(cls, value: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if not all(0.0 < p < 1.0 for p in value):
            raise ValueError("star thresholds must lie in (0, 1)")
        if not (value[0] > value[1] > value[2]):
            raise ValueError("star thresholds must be strictly decreasing")
        return value

    @model_validator(mode="after")
    def _ordered_bounds(self) -> "PipelineConfig":
        if not self.threshold_min < self.threshold_max:
            raise ValueError("threshold_min must be < threshold_max")
        if self.min_words > self.max_words:
            raise ValueError("min_words must be <= max_words")
        return self


# ==============================================================================
# 🦕 RAPTOR ADMIN CLASS
# ==============================================================================

class RaptorAdmin:
    """
    The Keymaster: builds, validates and fingerprints configs.
    """

    @staticmethod
    def load_config_file(path: Path) -> Dict[str, str]:
        """
        Reads key=value lines. Blank lines and '#' comments are ignored.
        """
        values: Dict[str, str] = {}
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigSlip(f"cannot read config file {path}: {exc}") from exc

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigSlip(f"{path}:{number}: expected key=value, got '{line}'")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
        return values

    @staticmethod
    def build_config(
        file_values: Optional[Mapping[str, Any]] = None,
        cli_values: Optional[Mapping[str, Any]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> PipelineConfig:
        """
        Layers defaults < file < environment (paths only) < CLI flags.
        """
        env = os.environ if environ is None else environ
        merged: Dict[str, Any] = dict(file_values or {})
        for field, variable in PATH_ENV_OVERRIDES.items():
            if env.get(variable):
                merged[field] = env[variable]
        for key, value in (cli_values or {}).items():
            if value is not None:
                merged[key] = value

        try:
            config = PipelineConfig(**merged)
        except ValidationError as exc:
            raise ConfigSlip(f"invalid configuration: {exc}") from exc

        MonkeyHeart.log_system_event("CONFIG", f"Config ready (hash {RaptorAdmin.config_hash(config)})", severity="DEBUG")
        return config

    @staticmethod
    def config_hash(config: PipelineConfig) -> str:
        """First 12 hex digits of sha256 over the canonical JSON of the config."""
        payload = config.model_dump(mode="json", exclude=HASH_EXCLUDED)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦕 RAPTOR ADMIN V8.0 DIAGNOSTIC\n" + "=" * 40)

    print("\n[TEST 1] Defaults...")
    base = RaptorAdmin.build_config(environ={})
    print(f" > threshold band: [{base.threshold_min}, {base.threshold_max}] hash={RaptorAdmin.config_hash(base)}")

    print("\n[TEST 2] CLI beats file...")
    layered = RaptorAdmin.build_config({"seed": "3"}, {"seed": 9}, environ={})
    print(f" > seed = {layered.seed}")

    print("\n[TEST 3] Rejects inverted thresholds...")
    try:
        RaptorAdmin.build_config({"threshold_min": "0.8", "threshold_max": "0.2"}, environ={})
    except ConfigSlip as slip:
        print(f" > rejected (exit {slip.exit_code})")

    print("\n" + "=" * 40)
    print("🦕 RAPTOR ADMIN SYSTEM: OPERATIONAL")
