"""
Log Reporter Implementation

Implements the Reporter interface on top of loguru. Default for CLI runs.
"""

import traceback
from typing import Any, Dict, List

from loguru import logger

from reporting.reporter import Reporter
from reporting.tables import dumps_json, rows_to_csv


class LogReporter(Reporter):
    """Writes steps at INFO and attachments at DEBUG."""

    def log_step(self, message: str) -> None:
        logger.info(message)

    def attach_text(self, name: str, content: str) -> None:
        logger.debug(f"[{name}]\n{content}")

    def attach_json(self, name: str, payload: Any) -> None:
        logger.debug(f"[{name}]\n{dumps_json(payload)}")

    def attach_table(self, name: str, rows: List[Dict[str, Any]]) -> None:
        if not rows:
            logger.debug(f"[{name}] (no rows)")
            return
        logger.debug(f"[{name}]\n{rows_to_csv(rows)}")

    def attach_exception(self, name: str, exception: Exception) -> None:
        details = "".join(traceback.format_exception(type(exception), exception, exception.__traceback__))
        logger.error(f"[{name}] {details}")
