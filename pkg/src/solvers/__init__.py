"""
Solvers for the simplex-constrained ball dual of the L2-SVM.
"""

from typing import Callable, Dict, Optional, Tuple

from src.config import SolverConfig
from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.core_vector import train_bc
from src.solvers.frank_wolfe import train_fw, train_mfw
from src.solvers.state import DualState, TrainStats
from src.solvers.trace import TraceWriter
from src.utils.errors import UsageError

Trainer = Callable[..., Tuple[DualState, TrainStats]]

SOLVERS: Dict[str, Trainer] = {
    'fw': train_fw,
    'mfw': train_mfw,
    'bc': train_bc,
}


def get_solver(name: str) -> Trainer:
    try:
        return SOLVERS[name]
    except KeyError:
        raise UsageError(f"Unknown solver '{name}', expected one of {sorted(SOLVERS)}") from None


def train(
    name: str,
    tk: TildeKernel,
    config: SolverConfig,
    cache: Optional[KernelCache] = None,
    trace: Optional[TraceWriter] = None
) -> Tuple[DualState, TrainStats]:
    return get_solver(name)(tk, config, cache=cache, trace=trace)


__all__ = [
    'SOLVERS', 'get_solver', 'train', 'train_fw', 'train_mfw', 'train_bc',
    'DualState', 'TrainStats', 'TraceWriter',
]
