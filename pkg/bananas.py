"""
BANANAS V8.0
The Error Shield for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Every failure in the pipeline is a "slip". Slips carry the context of where
they happened and the exit code the command line must return. Bananas turns a
slip into a log entry (with the full traceback) and hands the exit code back to
the caller.

CORE CAPABILITIES:
1. Slip hierarchy (config / upstream / data / parse / numeric).
2. Collision reporting (traceback -> Monkey Heart).
3. Non-fatal notices (the "with warning" path of every module).

INTEGRATIONS:
- Monkey Heart (Logging)
"""

import traceback
from typing import Any, Dict, Optional

from monkey_heart import MonkeyHeart


# ==============================================================================
# 🍌 THE SLIPS
# ==============================================================================

class BananaSlip(Exception):
    """Base class for every pipeline failure."""

    exit_code = 1

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = dict(context or {})


class ConfigSlip(BananaSlip):
    """Invalid configuration, parameter out of range, closed-form domain error."""

    exit_code = 2


class UpstreamSlip(ConfigSlip):
    """A command ran before the command that produces its inputs."""

    def __init__(self, artifact: str, command: str):
        super().__init__(
            f"missing artifact '{artifact}'; run '{command}' first",
            {"artifact": artifact, "command": command},
        )
        self.artifact = artifact
        self.command = command


class DataSlip(BananaSlip):
    """Input data violates an invariant (duplicates, empty vocabulary, NaN)."""

    exit_code = 3


class ParseSlip(DataSlip):
    """Malformed input line."""

    def __init__(self, line_number: int, detail: str):
        super().__init__(f"line {line_number}: {detail}", {"line": line_number})
        self.line_number = line_number


class NumericSlip(BananaSlip):
    """Rank deficiency, unreachable targets, non-convergence."""

    exit_code = 4


# ==============================================================================
# 🛡️ THE SHIELD
# ==============================================================================

class Bananas:
    """
    SURVEILLANCE: error dissection and collision reporting.
    """

    @staticmethod
    def report_collision(error: BaseException, context: str = "KERNEL_CORE") -> int:
        """
        Logs a failure with its traceback and returns the process exit code.

        ARGS:
            error: the exception that stopped the command.
            context: which node of the pipeline was running.
        """
        trace = "".join(traceback.format_exception(type(error), error, error.__traceback__))
        code = error.exit_code if isinstance(error, BananaSlip) else 1
        fields = dict(error.context) if isinstance(error, BananaSlip) else {}
        MonkeyHeart.log_system_event(
            "COLLISION",
            f"Node: {context} | Error: {error}",
            severity="ERROR",
            exit_code=code,
            **fields,
        )
        MonkeyHeart.log_system_event("STACK", trace.rstrip(), severity="DEBUG")
        return code

    @staticmethod
    def notify(status_type: str, message: str, **fields: Any) -> None:
        """
        Non-error notices. status_type is INFO or WARNING.
        """
        severity = "WARNING" if status_type.upper() == "WARNING" else "INFO"
        MonkeyHeart.log_system_event("NOTICE", message, severity=severity, **fields)


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🍌 BANANAS V8.0 DIAGNOSTIC\n" + "=" * 40)

    print("\n[TEST 1] Parse slip exit code...")
    try:
        raise ParseSlip(7, "expecting value")
    except BananaSlip as slip:
        print(f" > exit code: {Bananas.report_collision(slip, 'INGEST')}")

    print("\n[TEST 2] Upstream slip names the command...")
    print(f" > {UpstreamSlip('niche.csv', 'niche')}")

    print("\n[TEST 3] Warning notice...")
    Bananas.notify("WARNING", "unknown genre 'widgets' mapped to lifestyle")

    print("\n" + "=" * 40)
    print("🍌 BANANAS SYSTEM: OPERATIONAL")
