"""
Frank-Wolfe training of the ball dual, with and without away steps.
"""

import math
from typing import Optional, Tuple

from src.config import SolverConfig
from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.runner import SolverRun
from src.solvers.state import DualState, TrainStats, prune_weights
from src.solvers.steps import (
    away_apply_step,
    away_line_search,
    check_stop,
    delta_minus_of,
    fw_apply_step,
    fw_line_search,
    nearest_in_coreset,
    with_column,
)
from src.solvers.trace import TraceWriter


def _train(
    name: str,
    tk: TildeKernel,
    config: SolverConfig,
    away_steps: bool,
    cache: Optional[KernelCache],
    trace: Optional[TraceWriter]
) -> Tuple[DualState, TrainStats]:
    run = SolverRun(name, tk, config, cache, trace)
    stats = run.stats
    state = run.start()
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

        delta_minus = math.nan
        take_away = False
        if away_steps and len(state) > 1:
            nearest = nearest_in_coreset(tk, state)
            delta_minus = delta_minus_of(nearest, state)
            take_away = delta_minus > delta_plus

        if take_away:
            nearest = with_column(tk, state, nearest, run.cache)
            lam = away_line_search(tk, state, nearest, delta_minus)
            size = len(state)
            state = away_apply_step(tk, state, nearest, lam, config.zero_tolerance)
            stats.away_steps += 1
            step = 'away'
            if len(state) < size:
                stats.drop_steps += 1
                step = 'drop'
        else:
            lam = fw_line_search(tk, state, candidate)
            state = fw_apply_step(tk, state, candidate, lam, delta_plus)
            state = prune_weights(tk, state, config.zero_tolerance, run.cache)
            stats.fw_steps += 1
            step = 'fw'
        state = run.after_step(state, step, delta_plus, delta_minus)

    return run.finish(state, converged)


def train_fw(
    tk: TildeKernel,
    config: SolverConfig,
    cache: Optional[KernelCache] = None,
    trace: Optional[TraceWriter] = None
) -> Tuple[DualState, TrainStats]:
    """Plain Frank-Wolfe: every iteration steps toward the furthest row"""
    return _train('fw', tk, config, False, cache, trace)


def train_mfw(
    tk: TildeKernel,
    config: SolverConfig,
    cache: Optional[KernelCache] = None,
    trace: Optional[TraceWriter] = None
) -> Tuple[DualState, TrainStats]:
    """
    Frank-Wolfe with away steps. Each iteration compares the outward
    violation of the furthest row with the inward slack of the nearest
    coreset row, both against the same r2, and steps away from the
    nearest row only when its slack is strictly larger. An away step at
    its upper bound drops the row from the coreset.
    """
    return _train('mfw', tk, config, True, cache, trace)
