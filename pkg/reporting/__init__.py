"""
Reporting Module

Abstraction layer for reporting computed tables and suite outcomes, so the
same verification code can write to the log (CLI) or to Allure (test sessions).
"""

from reporting.manager import ReportingManager

__all__ = ["ReportingManager"]
