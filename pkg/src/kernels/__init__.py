"""
Base Mercer kernels, the labelled and regularised kernel of the ball
reduction, and the per-solver column cache.
"""

from src.kernels.base import KernelSpec, kernel_eval, kernel_block
from src.kernels.tilde import TildeKernel, tilde_eval, tilde_diag
from src.kernels.cache import KernelCache, cache_get_column

__all__ = [
    'KernelSpec', 'kernel_eval', 'kernel_block',
    'TildeKernel', 'tilde_eval', 'tilde_diag',
    'KernelCache', 'cache_get_column',
]
