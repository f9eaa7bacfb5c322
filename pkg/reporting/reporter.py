"""
Reporter Interface

Abstract base class defining the contract for any reporting implementation.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List


class Reporter(ABC):
    """
    Abstract base class for reporting implementations.

    Verification suites and studies only talk to this interface, so switching
    between the log and Allure needs no change in library code.
    """

    @abstractmethod
    def log_step(self, message: str) -> None:
        """
        Log a step.

        Example:
            reporter.log_step("Suite vanishing: 240 checks")
        """
        pass

    @abstractmethod
    def attach_text(self, name: str, content: str) -> None:
        """Attach text content under ``name``."""
        pass

    @abstractmethod
    def attach_json(self, name: str, payload: Any) -> None:
        """
        Attach a JSON-serializable payload.

        Example:
            reporter.attach_json("Gram N=2", gram.to_json())
        """
        pass

    @abstractmethod
    def attach_table(self, name: str, rows: List[Dict[str, Any]]) -> None:
        """Attach a list of homogeneous rows as a CSV table."""
        pass

    @abstractmethod
    def attach_exception(self, name: str, exception: Exception) -> None:
        """Attach exception details."""
        pass
