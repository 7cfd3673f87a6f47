from __future__ import annotations

import json
import logging
import os
import time
from enum import Enum

from dotenv import load_dotenv

load_dotenv()

LOGGER_NAME = "oscint"
DEFAULT_LOG_LEVEL = "INFO"

logger = logging.getLogger(LOGGER_NAME)


class ActivityEvent(str, Enum):
    SWEEP_STARTED = "sweep_started"
    RUN_COMPLETED = "run_completed"
    RUN_FAILED = "run_failed"
    SWEEP_COMPLETED = "sweep_completed"
    CSV_WRITTEN = "csv_written"
    VERIFY_COMPLETED = "verify_completed"
    CONFIG_REJECTED = "config_rejected"


def configure_logging(level: str | None = None) -> None:
    """Attach a stderr handler to the package logger (idempotent)."""
    level_name = (level or os.getenv("OSCINT_LOG_LEVEL") or DEFAULT_LOG_LEVEL).strip().upper()
    resolved = logging.getLevelName(level_name)
    if not isinstance(resolved, int):
        resolved = logging.INFO
    logger.setLevel(resolved)
    if not any(getattr(handler, "_oscint", False) for handler in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(message)s"))
        handler._oscint = True  # type: ignore[attr-defined]
        logger.addHandler(handler)


def log_activity(
    event_type: ActivityEvent | str,
    result: str | None = None,
    *,
    level: str = "info",
    status: str = "success",
    metadata: dict[str, object] | None = None,
    source: str | None = None,
) -> None:
    """Emit one structured activity record as a JSON line."""
    record = {
        "event_type": str(getattr(event_type, "value", event_type)),
        "level": level,
        "status": status,
        "result": result,
        "metadata": metadata or {},
        "source": source,
        "created_at": time.time(),
    }
    log_level = logging.getLevelName(level.upper())
    if not isinstance(log_level, int):
        log_level = logging.INFO
    logger.log(log_level, json.dumps(record, default=str, sort_keys=True))
