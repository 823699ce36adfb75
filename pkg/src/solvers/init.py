"""
Initial coresets: the two-point ball and the ball of a small random subset.
"""

from typing import Optional

import numpy as np

from src.config import SolverConfig
from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.reduced_qp import reduced_qp_solve
from src.solvers.state import DualState, TrainStats, coreset_gram, state_from_weights
from src.utils.errors import NonConvergenceError, UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _require_rows(tk: TildeKernel):
    if tk.m < 2:
        raise UsageError(f"training needs at least 2 rows, got {tk.m}")


def init_two_point(
    tk: TildeKernel,
    config: SolverConfig,
    rng: np.random.Generator,
    cache: Optional[KernelCache] = None
) -> DualState:
    """
    Seeded row a plus the row b furthest from it, each with weight 1/2.
    """
    _require_rows(tk)
    a = int(rng.integers(tk.m))
    everything = np.arange(tk.m, dtype=np.int64)
    if cache is None:
        row = tk.block([a], everything)[0]
    else:
        row = cache.evaluate(tk, [a], everything)[0]
    distances = tk.diag + tk.diag[a] - 2.0 * row
    distances[a] = -np.inf
    b = int(np.argmax(distances))
    rows = np.array([a, b], dtype=np.int64)
    logger.debug(f"Two-point init on rows {a} and {b}")
    return state_from_weights(tk, rows, [0.5, 0.5], cache)


def init_random_meb(
    tk: TildeKernel,
    config: SolverConfig,
    rng: np.random.Generator,
    cache: Optional[KernelCache] = None,
    stats: Optional[TrainStats] = None
) -> DualState:
    """
    Exact ball of ``config.init.p`` seeded rows, solved by the reduced QP
    to eps/10. Falls back to the two-point init when that solve hits its
    cap, flagging ``stats.init_fallback``.
    """
    _require_rows(tk)
    p = config.init.p
    if p >= tk.m:
        rows = np.arange(tk.m, dtype=np.int64)
    else:
        rows = np.sort(rng.choice(tk.m, size=p, replace=False)).astype(np.int64)
    gram = coreset_gram(tk, rows, cache)
    warm = np.full(len(rows), 1.0 / len(rows))
    try:
        alpha = reduced_qp_solve(tk, rows, warm, config.inner_epsilon, config.inner_iter_cap, gram=gram)
    except NonConvergenceError as e:
        logger.warning(f"Random subset init did not converge ({e}); using two-point init")
        if stats is not None:
            stats.init_fallback = True
        return init_two_point(tk, config, rng, cache)

    keep = alpha > config.zero_tolerance
    weights = alpha[keep] / alpha[keep].sum()
    logger.debug(f"Random subset init kept {int(keep.sum())} of {len(rows)} rows")
    return state_from_weights(tk, rows[keep], weights, cache, gram=gram[np.ix_(keep, keep)])


def initialize(
    tk: TildeKernel,
    config: SolverConfig,
    rng: np.random.Generator,
    cache: Optional[KernelCache] = None,
    stats: Optional[TrainStats] = None
) -> DualState:
    if config.init.kind == 'two-point':
        return init_two_point(tk, config, rng, cache)
    return init_random_meb(tk, config, rng, cache, stats)
