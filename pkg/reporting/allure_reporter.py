"""
Allure Reporter Implementation

Implements Reporter interface using the Allure Python API.
All Allure-specific imports and logic are contained here.
"""

import traceback
from typing import Any, Dict, List

from loguru import logger

from reporting.reporter import Reporter
from reporting.tables import dumps_json, rows_to_csv


class AllureReporter(Reporter):
    """
    Reporter implementation using Allure reporting framework.

    No Allure imports should appear outside this module.
    """

    def __init__(self):
        """Initialize Allure reporter."""
        try:
            import allure
            self.allure = allure
        except ImportError:
            raise ImportError(
                "allure-pytest package not found. "
                "Install with: pip install allure-pytest"
            )

    def log_step(self, message: str) -> None:
        with self.allure.step(message):
            pass

    def _attach(self, body: str, name: str, attachment_type) -> None:
        try:
            self.allure.attach(body, name=name, attachment_type=attachment_type)
        except Exception as e:
            logger.debug(f"Could not attach '{name}' to Allure: {e}")

    def attach_text(self, name: str, content: str) -> None:
        self._attach(content, name, self.allure.attachment_type.TEXT)

    def attach_json(self, name: str, payload: Any) -> None:
        self._attach(dumps_json(payload), name, self.allure.attachment_type.JSON)

    def attach_table(self, name: str, rows: List[Dict[str, Any]]) -> None:
        self._attach(rows_to_csv(rows), name, self.allure.attachment_type.CSV)

    def attach_exception(self, name: str, exception: Exception) -> None:
        details = "".join(traceback.format_exception(type(exception), exception, exception.__traceback__))
        self._attach(details, name, self.allure.attachment_type.TEXT)
