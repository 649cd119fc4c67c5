"""
MONKEY BRAIN V10.0 | THE ARTIFACT LEDGER
Single Source of Truth for every file the pipeline produces.

Each command reads the artifacts of the command before it and writes its own
through the Brain. Text artifacts open with a header comment carrying the
config hash and tool version; JSON artifacts carry the same under "_meta".
Writes are atomic (temp file + rename) and contain no timestamps, so the same
inputs and config give byte-identical files.
"""

import hashlib
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from bananas import DataSlip, UpstreamSlip
from monkey_heart import MonkeyHeart


TOOL_NAME = "just-in-niche"
TOOL_VERSION = "1.0.0"
FLOAT_FORMAT = "%.10g"

# artifact -> command that writes it
PRODUCERS = {
    "panel_raw.jsonl": "ingest",
    "panel_imputed.jsonl": "impute",
    "deleted_apps.csv": "impute",
    "niche.csv": "niche",
    "derived_rows.csv": "describe",
}


class MonkeyBrain:
    """The central data-limb: one output directory, one config hash."""

    def __init__(self, output_dir: Path, config_hash: str):
        self.output_dir = Path(output_dir)
        self.config_hash = config_hash

    # ==========================================================================
    # 🧠 PATHS & HEADERS
    # ==========================================================================

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def exists(self, name: str) -> bool:
        return self.path(name).is_file()

    @property
    def header(self) -> str:
        return f"# config={self.config_hash} tool={TOOL_NAME}/{TOOL_VERSION}"

    @property
    def meta(self) -> Dict[str, str]:
        return {"config": self.config_hash, "tool": f"{TOOL_NAME}/{TOOL_VERSION}"}

    # ==========================================================================
    # ✍️ WRITERS
    # ==========================================================================

    def _atomic_write(self, name: str, text: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        MonkeyHeart.log_system_event("ARTIFACT", f"wrote {target}", severity="DEBUG")
        return target

    def write_text(self, name: str, body: str) -> Path:
        if not body.endswith("\n"):
            body += "\n"
        return self._atomic_write(name, f"{self.header}\n{body}")

    def write_lines(self, name: str, lines: List[str]) -> Path:
        return self.write_text(name, "\n".join(lines))

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
        return self._atomic_write(name, f"{self.header}\n{buffer.getvalue()}")

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        document = {"_meta": self.meta, **payload}
        text = json.dumps(document, indent=2, sort_keys=True, default=_json_default, allow_nan=True)
        return self._atomic_write(name, text + "\n")

    # ==========================================================================
    # 📖 READERS
    # ==========================================================================

    def _require(self, name: str, command: str = "") -> Path:
        target = self.path(name)
        if not target.is_file():
            raise UpstreamSlip(name, command or PRODUCERS.get(name, "the producing command"))
        return target

    def read_lines(self, name: str, command: str = "") -> List[str]:
        """Lines after the header comment."""
        lines = self._require(name, command).read_text(encoding="utf-8").splitlines()
        if lines and lines[0].startswith("# config="):
            lines = lines[1:]
        return lines

    def read_text(self, name: str, command: str = "") -> str:
        return "\n".join(self.read_lines(name, command)) + "\n"

    def read_csv(self, name: str, command: str = "", **kwargs: Any) -> pd.DataFrame:
        target = self._require(name, command)
        try:
            return pd.read_csv(target, comment=None, skiprows=1, keep_default_na=True, **kwargs)
        except pd.errors.EmptyDataError:
            return pd.DataFrame()
        except (ValueError, pd.errors.ParserError) as exc:
            raise DataSlip(f"cannot parse artifact {name}: {exc}") from exc

    def read_json(self, name: str, command: str = "") -> Dict[str, Any]:
        target = self._require(name, command)
        try:
            document = json.loads(target.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataSlip(f"cannot parse artifact {name}: {exc}") from exc
        document.pop("_meta", None)
        return document

    def checksum(self, name: str) -> str:
        return hashlib.sha256(self._require(name).read_bytes()).hexdigest()

    def listing(self) -> List[str]:
        """Artifact names in the output directory, sorted."""
        if not self.output_dir.is_dir():
            return []
        return sorted(p.name for p in self.output_dir.iterdir() if p.is_file() and not p.name.startswith("."))


def _json_default(value: Any) -> Any:
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "isoformat"):
        return value.isoformat()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🧠 MONKEY BRAIN V10.0 DIAGNOSTIC\n" + "=" * 40)

    with tempfile.TemporaryDirectory() as scratch:
        brain = MonkeyBrain(Path(scratch), "abc123def456")

        print("\n[TEST 1] CSV round trip...")
        brain.write_csv("demo.csv", pd.DataFrame({"k": [2, 3], "inertia": [10.5, 4.25]}))
        print(brain.read_csv("demo.csv"))

        print("\n[TEST 2] Missing artifact...")
        try:
            brain.read_csv("niche.csv")
        except UpstreamSlip as slip:
            print(f" > {slip}")

        print("\n[TEST 3] Checksum...")
        print(f" > {brain.checksum('demo.csv')[:16]}...")

    print("\n" + "=" * 40)
    print("🧠 MONKEY BRAIN SYSTEM: OPERATIONAL")
