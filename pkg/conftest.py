"""
Root pytest configuration file.

Delegates all fixture and hook configuration to core/conftest.py.
"""

pytest_plugins = ["core.conftest"]
