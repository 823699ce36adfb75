"""
Core vector training: grow the coreset by the furthest row and re-solve
the restricted dual exactly at each step.
"""

import math
from typing import Optional, Tuple

import numpy as np

from src.config import SolverConfig
from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.reduced_qp import reduced_qp_solve
from src.solvers.runner import SolverRun
from src.solvers.state import DualState, TrainStats, coreset_gram, state_from_weights
from src.solvers.steps import check_stop
from src.solvers.trace import TraceWriter
from src.utils.errors import NonConvergenceError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _extend_gram(gram: np.ndarray, column: np.ndarray, diag: float) -> np.ndarray:
    size = len(gram)
    grown = np.empty((size + 1, size + 1))
    grown[:size, :size] = gram
    grown[size, :size] = column
    grown[:size, size] = column
    grown[size, size] = diag
    return grown


def train_bc(
    tk: TildeKernel,
    config: SolverConfig,
    cache: Optional[KernelCache] = None,
    trace: Optional[TraceWriter] = None
) -> Tuple[DualState, TrainStats]:
    """
    Core vector machine loop. The new row enters with weight 0 and the
    reduced QP is warm-started from the previous weights and solved to
    ``config.inner_epsilon``. A reduced QP that hits its cap ends the run
    unconverged with the last inner iterate.
    """
    run = SolverRun('bc', tk, config, cache, trace)
    stats = run.stats
    state = run.start()
    gram = coreset_gram(tk, state.coreset, run.cache)
    converged = False

    while True:
        candidate, delta_plus = run.furthest(state)
        if check_stop(delta_plus, config.epsilon):
            state, candidate, delta_plus, accepted = run.certify(state)
            if accepted:
                converged = True
                break
        if run.exhausted(state):
            break
        if state.position(candidate.index) is not None:
            logger.warning(
                f"bc: furthest row {candidate.index} already in the coreset "
                f"(delta+={delta_plus:.3g}); the reduced QP cannot improve further"
            )
            converged = True
            break

        rows = np.append(state.coreset, np.int64(candidate.index))
        grown = _extend_gram(gram, candidate.column, candidate.diag)
        warm = np.append(state.weights, 0.0)
        inner = []
        try:
            alpha = reduced_qp_solve(tk, rows, warm, config.inner_epsilon, config.inner_iter_cap,
                                     gram=grown, counter=inner)
        except NonConvergenceError as e:
            logger.warning(f"bc: {e}")
            stats.inner_steps += e.iterations
            state = state_from_weights(tk, rows, e.alpha, run.cache, state.iteration + 1)
            stats.fw_steps += 1
            state = run.after_step(state, 'bc', delta_plus, math.nan)
            break
        stats.inner_steps += inner[0]

        keep = alpha > config.zero_tolerance
        weights = alpha[keep] / alpha[keep].sum()
        gram = grown[np.ix_(keep, keep)]
        state = state_from_weights(tk, rows[keep], weights, gram=gram, iteration=state.iteration + 1)
        stats.fw_steps += 1
        state = run.after_step(state, 'bc', delta_plus, math.nan)
        if len(state) != len(gram) or not np.array_equal(state.coreset, rows[keep]):
            gram = coreset_gram(tk, state.coreset, run.cache)

    return run.finish(state, converged)
