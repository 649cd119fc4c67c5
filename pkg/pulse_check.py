"""
PULSE CHECK V8.0
The System Diagnostic & Health Monitoring Utility for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Before any stage touches data, this walks the whole body: the third-party
stack the owls lean on, every pipeline module and its main class, and the
report template the command deck renders. One board, green or not.

CORE CAPABILITIES:
1. Dependency Check (numpy, scipy, pandas, pydantic, jinja2, nltk).
2. Module Integrity Check (import + main class per module).
3. Template Check (report.md.j2 present and parseable).
4. The "Green Board" (Launch Status).
"""

import importlib
import time
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple

# ==============================================================================
# 📋 THE V8.0 MANIFEST
# ==============================================================================

DEPENDENCIES: List[str] = ["numpy", "scipy", "pandas", "pydantic", "jinja2", "nltk"]

# (module, role, entry point); None means the PascalCase of the module name
MODULES_TO_CHECK: List[Tuple[str, str, Optional[str]]] = [
    # 🍌 & ❤️ The Core
    ("bananas", "The Shield", None),
    ("monkey_heart", "The Logger", None),
    ("monkey_brain", "Artifact Ledger", None),
    ("raptor_admin", "Global Config", None),

    # 🐰 Rabbit (Intake)
    ("rabbit_corpus", "Panel & Variables", None),
    ("rabbit_textprep", "Text Cleaning", None),

    # 🦉 Owl (Analytics)
    ("owl_vectorize", "TF-IDF", None),
    ("owl_reduce", "Truncated SVD", None),
    ("owl_cluster", "K-Means & Niche", None),
    ("owl_econometrics", "Regressions", None),
    ("owl_equilibrium", "Pricing Games", None),

    # 🚀 Launch
    ("genesis", "Synthetic Seeder", "GenesisProtocol"),
    ("just_in_niche", "Command Deck", "main"),
]

TEMPLATE = Path(__file__).resolve().parent / "templates" / "report.md.j2"


@dataclass
class Vital:
    group: str
    name: str
    ok: bool
    detail: str


# ==============================================================================
# 🩺 DIAGNOSTIC ENGINE
# ==============================================================================

class PulseCheck:
    def __init__(self):
        self.vitals: List[Vital] = []
        self.start_time = time.time()

    def run_diagnostics(self) -> bool:
        print("\n" + "=" * 60)
        print("🩺 JUST-IN-NICHE V8.0 SYSTEM DIAGNOSTIC")
        print(f"📅 DATE: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        print("=" * 60)

        print("\n📦 STACK")
        for package in DEPENDENCIES:
            self._record(self._check_dependency(package))

        print("\n🧬 ORGANS")
        for module_name, role, entry in MODULES_TO_CHECK:
            self._record(self._check_organ(module_name, role, entry))

        print("\n📰 TEMPLATE")
        self._record(self._check_template())

        self._print_summary()
        return all(v.ok for v in self.vitals)

    @property
    def failures(self) -> List[Vital]:
        return [v for v in self.vitals if not v.ok]

    def _record(self, vital: Vital) -> None:
        self.vitals.append(vital)
        print(f"{'✅' if vital.ok else '❌'} {vital.name:<20} | {vital.detail}")

    @staticmethod
    def _check_dependency(package: str) -> Vital:
        try:
            mod = importlib.import_module(package)
        except ImportError as e:
            return Vital("stack", package, False, f"NOT INSTALLED ({e})")
        return Vital("stack", package, True, getattr(mod, "__version__", "unknown version"))

    @staticmethod
    def _check_organ(module_name: str, role: str, entry: Optional[str]) -> Vital:
        # e.g. owl_reduce -> OwlReduce
        entry = entry or "".join(part.title() for part in module_name.split("_"))
        t0 = time.perf_counter()
        try:
            mod = importlib.import_module(module_name)
        except Exception as e:
            return Vital("organ", module_name, False, f"{role}: IMPORT FAILED ({e})")
        elapsed_ms = (time.perf_counter() - t0) * 1000
        if not hasattr(mod, entry):
            return Vital("organ", module_name, False, f"{role}: no '{entry}'")
        return Vital("organ", module_name, True, f"{role} | {elapsed_ms:.2f}ms")

    @staticmethod
    def _check_template() -> Vital:
        if not TEMPLATE.exists():
            return Vital("template", TEMPLATE.name, False, "MISSING")
        try:
            from jinja2 import Environment, TemplateSyntaxError
        except ImportError:
            return Vital("template", TEMPLATE.name, False, "jinja2 unavailable")
        try:
            Environment().parse(TEMPLATE.read_text(encoding="utf-8"))
        except TemplateSyntaxError as e:
            return Vital("template", TEMPLATE.name, False, f"line {e.lineno}: {e.message}")
        return Vital("template", TEMPLATE.name, True, "parses")

    def _print_summary(self) -> None:
        total, bad = len(self.vitals), self.failures
        print("\n" + "-" * 60)
        print(f"📊 {total - len(bad)}/{total} VITALS GREEN IN {time.time() - self.start_time:.3f}s")
        if not bad:
            print("🚀 SYSTEM STATUS: GREEN. READY FOR LAUNCH.")
        else:
            print(f"⚠️ SYSTEM STATUS: YELLOW. Failing: {', '.join(v.name for v in bad)}")
        print("=" * 60 + "\n")


# ==============================================================================
# 🚀 MAIN EXECUTION
# ==============================================================================

if __name__ == "__main__":
    raise SystemExit(0 if PulseCheck().run_diagnostics() else 1)
