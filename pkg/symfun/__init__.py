"""
Symmetric function package for qjsf.

interp        interpolation symmetric functions I_mu and polynomials I_{mu|N}
bigq          parameter classification, big q-Jacobi polynomials and Phi_lambda
measure       truncated lattices, Gram matrices and convergence studies
verification  acceptance suites
"""

from symfun.bigq import QParams, Series, classify, params_from_mapping
from symfun.interp import SchurExpansion, h_norm, interp_expansion, sigma

__all__ = [
    'QParams',
    'Series',
    'classify',
    'params_from_mapping',
    'SchurExpansion',
    'h_norm',
    'interp_expansion',
    'sigma',
]
