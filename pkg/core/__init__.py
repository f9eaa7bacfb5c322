"""
Core package for qjsf.
Exact scalars, partitions, q-series helpers and the base test class.
"""

from core.errors import QJSFError
from core.partition import Partition, parse_partition
from core.qseries import QContext
from core.scalar import GaussianRational, parse_scalar

__all__ = ['QJSFError', 'Partition', 'parse_partition', 'QContext', 'GaussianRational', 'parse_scalar']
