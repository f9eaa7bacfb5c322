"""
Reporting Manager

Central facade for accessing the active reporter instance.
Manages reporter initialization and provides singleton-like access.
"""

from typing import Any, Dict, List, Optional

from loguru import logger

from reporting.reporter import Reporter
from reporting.log_reporter import LogReporter


SUPPORTED_REPORTERS = ("log", "allure")


class ReportingManager:
    """
    Facade for managing reporting.

    Usage:
        ReportingManager.init("log")
        ReportingManager.reporter().attach_table("Gram", rows)
    """

    _instance: Optional[Reporter] = None
    _reporter_type: Optional[str] = None

    @classmethod
    def init(cls, reporter_type: str = "log") -> None:
        """
        Initialize the reporting manager with a specific reporter type.

        Called once per pytest session (pytest_configure) or CLI run.

        Args:
            reporter_type: "log" or "allure"

        Raises:
            ValueError: If reporter type is not supported
            ImportError: If reporter dependencies are not installed
        """
        if cls._instance is not None:
            logger.debug(
                f"ReportingManager already initialized with {cls._reporter_type}. "
                "Skipping re-initialization."
            )
            return

        reporter_type = reporter_type.lower()
        if reporter_type == "log":
            cls._instance = LogReporter()
        elif reporter_type == "allure":
            from reporting.allure_reporter import AllureReporter

            try:
                cls._instance = AllureReporter()
            except ImportError as e:
                logger.error(f"Failed to initialize reporter: {e}")
                raise
        else:
            raise ValueError(
                f"Unsupported reporter type: {reporter_type}. "
                f"Currently supported: {', '.join(SUPPORTED_REPORTERS)}"
            )
        cls._reporter_type = reporter_type
        logger.debug(f"✓ ReportingManager initialized with {reporter_type}")

    @classmethod
    def reporter(cls) -> Reporter:
        """
        Get the active reporter instance.

        Raises:
            RuntimeError: If ReportingManager has not been initialized
        """
        if cls._instance is None:
            raise RuntimeError(
                "ReportingManager not initialized. "
                "Call ReportingManager.init() during session setup."
            )
        return cls._instance

    @classmethod
    def reset(cls) -> None:
        """Reset the reporting manager; init() must be called again afterwards."""
        cls._instance = None
        cls._reporter_type = None
        logger.debug("ReportingManager reset")

    @classmethod
    def is_initialized(cls) -> bool:
        return cls._instance is not None

    @classmethod
    def reporter_type(cls) -> Optional[str]:
        return cls._reporter_type

    @classmethod
    def log_info(cls, message: str) -> None:
        """
        Log informational message to report.

        Safe to call even if reporter not initialized.
        """
        try:
            if cls.is_initialized():
                cls.reporter().log_step(message)
        except Exception:
            logger.debug(f"Could not log to reporter: {message}")

    @classmethod
    def attach_rows(cls, name: str, rows: List[Dict[str, Any]]) -> None:
        """Attach a result table to the active reporter; no-op when not initialized."""
        try:
            if cls.is_initialized():
                cls.reporter().attach_table(name, rows)
        except Exception as e:
            logger.debug(f"Could not attach table '{name}': {e}")
