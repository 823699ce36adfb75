"""
Bookkeeping shared by the outer training loops: RNG, cache, statistics,
the certified stop test, periodic dense verification and logging.
"""

import math
import time
from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from src.config import SolverConfig
from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.init import initialize
from src.solvers.state import Candidate, DualState, TrainStats, verify_state
from src.solvers.steps import check_stop, delta_plus_of, furthest_candidate
from src.solvers.trace import TraceWriter
from src.utils.errors import UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SolverRun:
    """
    State of one training run.

    A run owns its generator (PCG64 seeded from ``config.seed``), its
    kernel cache and its statistics; nothing is shared between runs.
    """

    def __init__(
        self,
        name: str,
        tk: TildeKernel,
        config: SolverConfig,
        cache: Optional[KernelCache] = None,
        trace: Optional[TraceWriter] = None
    ):
        if tk.m < 2:
            raise UsageError(f"training needs at least 2 rows, got {tk.m}")
        self.name = name
        self.tk = tk
        self.config = config
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self.cache = cache if cache is not None else KernelCache(config.cache_bytes)
        self.trace = trace
        self.stats = TrainStats(solver=name)
        self.sampling = config.sample_size < tk.m
        self._started = time.perf_counter()
        self._since_check = 0
        self._evals_before = self.cache.kernel_evals
        self._hits_before = self.cache.hits
        self._misses_before = self.cache.misses

    def start(self) -> DualState:
        state = initialize(self.tk, self.config, self.rng, self.cache, self.stats)
        logger.info(
            f"{self.name}: m={self.tk.m}, init {self.config.init.describe()} "
            f"with {len(state)} rows, r2={state.r2:.10g}"
        )
        self.record(state, 'init', math.nan, math.nan)
        return state

    def furthest(self, state: DualState) -> Tuple[Candidate, float]:
        candidate = furthest_candidate(self.tk, state, self.config, self.rng, self.cache)
        return candidate, delta_plus_of(candidate, state)

    def certify(self, state: DualState) -> Tuple[DualState, Candidate, float, bool]:
        """
        Called once the sampled stop test fires. Re-synchronises the state
        densely and, unless sampling without a final check, repeats the
        test over every row. Returns the state, the exhaustive candidate,
        its delta and whether termination is accepted.
        """
        state = verify_state(self.tk, state, self.cache, strict=self.config.debug)
        self._since_check = 0
        if self.sampling and not self.config.exact_final_check:
            return state, None, 0.0, True
        if self.sampling:
            self.stats.exact_checks += 1
        candidate = furthest_candidate(self.tk, state, self.config, self.rng, self.cache, exhaustive=True)
        delta_plus = delta_plus_of(candidate, state)
        if check_stop(delta_plus, self.config.epsilon):
            return state, candidate, delta_plus, True
        self.stats.rejected_stops += 1
        logger.debug(f"{self.name}: sampled stop rejected at iteration {state.iteration}, delta+={delta_plus:.3g}")
        return state, candidate, delta_plus, False

    def exhausted(self, state: DualState) -> bool:
        if self.stats.iterations < self.config.max_iterations:
            return False
        logger.warning(f"{self.name}: reached max_iterations={self.config.max_iterations} before converging")
        return True

    def after_step(self, state: DualState, step: str, delta_plus: float, delta_minus: float) -> DualState:
        self.stats.iterations += 1
        if state.iteration != self.stats.iterations:
            state = replace(state, iteration=self.stats.iterations)
        self._since_check += 1
        if self._since_check >= self.config.dense_check_period:
            state = verify_state(self.tk, state, self.cache, strict=self.config.debug)
            self._since_check = 0
        self.record(state, step, delta_plus, delta_minus)
        if self.config.log_every and self.stats.iterations % self.config.log_every == 0:
            logger.debug(
                f"{self.name}: iteration {self.stats.iterations}, r2={state.r2:.12g}, "
                f"delta+={delta_plus:.3g}, coreset {len(state)}"
            )
        return state

    def record(self, state: DualState, step: str, delta_plus: float, delta_minus: float):
        if self.trace is not None:
            self.trace.record(self.stats.iterations, step, delta_plus, delta_minus, state.r2, len(state))

    def finish(self, state: DualState, converged: bool) -> Tuple[DualState, TrainStats]:
        state = verify_state(self.tk, state, self.cache, strict=self.config.debug)
        stats = self.stats
        stats.converged = converged
        stats.wall_time_seconds = time.perf_counter() - self._started
        stats.final_objective = state.objective
        stats.final_r2 = state.r2
        stats.coreset_size = len(state)
        stats.kernel_evals = self.cache.kernel_evals - self._evals_before
        stats.cache_hits = self.cache.hits - self._hits_before
        stats.cache_misses = self.cache.misses - self._misses_before
        self.record(state, 'stop', math.nan, math.nan)
        logger.info(stats.summary())
        return state, stats
