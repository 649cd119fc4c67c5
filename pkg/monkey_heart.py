"""
MONKEY HEART V8.0
The Central Logging & Health Monitoring System for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Every module records what it is doing through the Heart. Events go to the
console (stderr, with an icon) and, when a log directory is configured, to a
JSON-lines file. Logs are a diary, never an artifact: they carry timestamps
and stay out of the output directory's determinism contract.

CORE CAPABILITIES:
1. System Event Logging (Debug/Info/Warning/Error).
2. Numeric Event Logging (counts, ranks, inertia, AIC).
3. Session tagging.

INTEGRATIONS:
- Native Python Logging
- JSON File Handler (for structured data)
"""

import json
import logging
import os
import sys
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, Optional


LOGGER_NAME = "just_in_niche"

ICONS = {
    "DEBUG": "🔧",
    "INFO": "ℹ️",
    "WARNING": "⚠️",
    "ERROR": "❌",
}


# ==============================================================================
# 🧾 FORMATTERS
# ==============================================================================

class _ConsoleFormatter(logging.Formatter):
    """<icon> [EVENT_TYPE] message"""

    def format(self, record: logging.LogRecord) -> str:
        icon = ICONS.get(record.levelname, "ℹ️")
        event_type = getattr(record, "event_type", "SYSTEM")
        return f"{icon} [{event_type}] {record.getMessage()}"


class _JsonLineFormatter(logging.Formatter):
    """One JSON object per event."""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "session": MonkeyHeart.SESSION_ID,
            "category": getattr(record, "category", "SYSTEM"),
            "type": getattr(record, "event_type", "SYSTEM"),
            "severity": record.levelname,
            "message": record.getMessage(),
        }
        entry.update(getattr(record, "fields", {}))
        return json.dumps(entry, default=str, sort_keys=True)


# ==============================================================================
# ❤️ MONKEY HEART CLASS
# ==============================================================================

class MonkeyHeart:
    """
    The Pulse of the System.

    ATTRIBUTES:
        LOG_DIR: where the .jsonl files live (None = console only).
        SESSION_ID: unique ID for this run of the software.
    """

    LOG_DIR: Optional[str] = os.environ.get("NICHE_LOG_DIR")
    SESSION_ID = f"SES-{uuid.uuid4().hex[:8].upper()}"
    _configured = False

    @classmethod
    def configure(cls, log_dir: Optional[str] = None, verbose: bool = False) -> logging.Logger:
        """
        (Re)builds the handlers. Safe to call more than once.
        """
        logger = logging.getLogger(LOGGER_NAME)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        logger.setLevel(logging.DEBUG)

        console = logging.StreamHandler(sys.stderr)
        console.setLevel(logging.DEBUG if verbose else logging.INFO)
        console.setFormatter(_ConsoleFormatter())
        logger.addHandler(console)

        if log_dir is not None:
            cls.LOG_DIR = log_dir
        if cls.LOG_DIR:
            os.makedirs(cls.LOG_DIR, exist_ok=True)
            today = datetime.now().strftime("%Y-%m-%d")
            path = os.path.join(cls.LOG_DIR, f"niche_{today}.jsonl")
            file_handler = logging.FileHandler(path, encoding="utf-8")
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(_JsonLineFormatter())
            logger.addHandler(file_handler)

        cls._configured = True
        return logger

    @classmethod
    def get_logger(cls) -> logging.Logger:
        if not cls._configured:
            cls.configure()
        return logging.getLogger(LOGGER_NAME)

    # ==========================================================================
    # 📝 LOGGING METHODS (The Recorder)
    # ==========================================================================

    @staticmethod
    def log_system_event(event_type: str, message: str, severity: str = "INFO", **fields: Any) -> None:
        """
        The standard log function used by all modules.

        ARGS:
            event_type: "INGEST", "IMPUTE", "SVD", "KMEANS", ...
            message: human readable line.
            severity: "DEBUG", "INFO", "WARNING", "ERROR"
            fields: structured extras for the JSON line.
        """
        level = logging.getLevelName(severity.upper())
        if not isinstance(level, int):
            level = logging.INFO
        MonkeyHeart.get_logger().log(
            level,
            message,
            extra={"event_type": event_type, "category": "SYSTEM", "fields": fields},
        )

    @staticmethod
    def log_numeric_event(stage: str, metrics: Dict[str, Any]) -> None:
        """
        Pipeline metrics (counts, ranks, inertia, AIC) as one structured event.
        """
        summary = ", ".join(f"{key}={value}" for key, value in metrics.items())
        MonkeyHeart.get_logger().info(
            f"{stage}: {summary}",
            extra={"event_type": stage, "category": "NUMERIC", "fields": dict(metrics)},
        )


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n❤️ MONKEY HEART V8.0 DIAGNOSTIC\n" + "=" * 40)

    MonkeyHeart.configure(verbose=True)

    print("\n[TEST 1] Standard Log...")
    MonkeyHeart.log_system_event("TEST", "This is a test message.")

    print("\n[TEST 2] Numeric Event...")
    MonkeyHeart.log_numeric_event("SVD", {"rank": 50, "explained_ratio": 0.951})

    print("\n[TEST 3] Warning...")
    MonkeyHeart.log_system_event("TEST", "Something looks off.", severity="WARNING")

    print("\n" + "=" * 40)
    print("❤️ MONKEY HEART SYSTEM: OPERATIONAL")
