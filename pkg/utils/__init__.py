"""
Utilities module for qjsf.

Provides the golden-data loader used by the test suites.
"""
