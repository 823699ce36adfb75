"""
Iterate, candidate and statistics types shared by the solvers, plus the
dense reference computations used for periodic verification.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.utils.errors import ConsistencyError
from src.utils.logger import get_logger

logger = get_logger(__name__)

SIMPLEX_TOLERANCE = 1e-10
RADIUS_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class DualState:
    """
    The iterate alpha_k on the unit simplex, stored over its support.

    ``coreset`` lists the rows with positive weight (in insertion order),
    ``weights`` their alpha values, and ``kalpha`` the matching entries of
    K~alpha. ``R`` is alpha'K~alpha and ``r2`` is Delta^2 - R, which is also
    the objective g(alpha) being maximised.
    """
    coreset: np.ndarray
    weights: np.ndarray
    kalpha: np.ndarray
    R: float
    r2: float
    delta2: float
    iteration: int = 0

    def position(self, row: int) -> Optional[int]:
        found = np.flatnonzero(self.coreset == row)
        return int(found[0]) if len(found) else None

    def weight(self, row: int) -> float:
        k = self.position(row)
        return 0.0 if k is None else float(self.weights[k])

    @property
    def alpha(self) -> Dict[int, float]:
        return {int(r): float(w) for r, w in zip(self.coreset.tolist(), self.weights.tolist())}

    def dense_alpha(self, m: int) -> np.ndarray:
        alpha = np.zeros(m)
        alpha[self.coreset] = self.weights
        return alpha

    @property
    def objective(self) -> float:
        """g(alpha) = Delta^2 - alpha'K~alpha"""
        return self.delta2 - self.R

    def __len__(self) -> int:
        return len(self.coreset)


@dataclass(frozen=True)
class Candidate:
    """
    A row considered for a step, with the quantities the step formulas need.

    ``gamma2`` is Delta^2 + R - 2 (K~alpha)_i: the squared distance to the
    center for normalized kernels and, in general, the gradient component
    of g shifted by a constant, so the ratio test against r2 is the
    first-order optimality test. ``column`` holds k~(x_i, x_j) for the
    coreset rows j, aligned with ``DualState.coreset``.
    """
    index: int
    gamma2: float
    kalpha: float
    diag: float
    column: Optional[np.ndarray] = None


@dataclass
class TrainStats:
    """Per-run counters"""
    solver: str = ''
    iterations: int = 0
    fw_steps: int = 0
    away_steps: int = 0
    drop_steps: int = 0
    inner_steps: int = 0
    kernel_evals: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    wall_time_seconds: float = 0.0
    final_objective: float = 0.0
    final_r2: float = 0.0
    coreset_size: int = 0
    converged: bool = False
    init_fallback: bool = False
    exact_checks: int = 0
    rejected_stops: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def summary(self) -> str:
        flag = '' if self.converged else ' [NOT CONVERGED]'
        return (
            f"{self.solver}: {self.iterations} iterations "
            f"(fw {self.fw_steps}, away {self.away_steps}, drop {self.drop_steps}), "
            f"coreset {self.coreset_size}, g={self.final_objective:.10g}, "
            f"{self.kernel_evals} kernel evals, {self.cache_hits} cache hits, "
            f"{self.wall_time_seconds:.3f}s{flag}"
        )


def coreset_gram(tk: TildeKernel, rows: Sequence[int], cache: Optional[KernelCache] = None) -> np.ndarray:
    if cache is None:
        return tk.block(rows, rows)
    return cache.get_columns(tk, rows, rows)


def state_from_weights(
    tk: TildeKernel,
    rows: Sequence[int],
    weights: Sequence[float],
    cache: Optional[KernelCache] = None,
    iteration: int = 0,
    gram: Optional[np.ndarray] = None
) -> DualState:
    """Build a state with K~alpha and R evaluated densely over the support"""
    rows = np.asarray(rows, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    keep = weights > 0.0
    if not keep.all():
        rows, weights = rows[keep], weights[keep]
        gram = None if gram is None else gram[np.ix_(keep, keep)]
    if len(rows) == 0:
        raise ConsistencyError("state with empty support")
    if gram is None:
        gram = coreset_gram(tk, rows, cache)
    kalpha = gram @ weights
    R = float(weights @ kalpha)
    return DualState(rows, weights, kalpha, R, tk.delta2 - R, tk.delta2, iteration)


def renormalize(state: DualState, tk: TildeKernel, cache: Optional[KernelCache] = None) -> DualState:
    """Rescale the weights back onto the simplex and recompute densely"""
    total = float(state.weights.sum())
    if total <= 0:
        raise ConsistencyError(f"weights sum to {total}")
    return state_from_weights(tk, state.coreset, state.weights / total, cache, state.iteration)


def prune_weights(
    tk: TildeKernel, state: DualState, zero_tolerance: float, cache: Optional[KernelCache] = None
) -> DualState:
    """Drop weights at or below the zero tolerance; renormalize if anything was dropped"""
    small = state.weights <= zero_tolerance
    if not small.any():
        return state
    if small.all():
        raise ConsistencyError("every weight fell below the zero tolerance")
    keep = ~small
    weights = state.weights[keep]
    return state_from_weights(tk, state.coreset[keep], weights / weights.sum(), cache, state.iteration)


def verify_state(
    tk: TildeKernel,
    state: DualState,
    cache: Optional[KernelCache] = None,
    strict: bool = False
) -> DualState:
    """
    Compare the incrementally maintained R, r2 and K~alpha against a dense
    recomputation and return the dense state.

    In strict mode the reference is rebuilt from the kernel with
    dual_objective, bypassing the cache, and a relative r2 mismatch above
    1e-8 raises ConsistencyError; otherwise the mismatch is logged.
    """
    if np.any(state.weights < 0):
        raise ConsistencyError("negative weight on the simplex")
    total = float(state.weights.sum())
    if abs(total - 1.0) > SIMPLEX_TOLERANCE:
        logger.debug(f"Weights drifted to sum {total!r}, renormalizing")
        return renormalize(state, tk, cache)

    dense = state_from_weights(tk, state.coreset, state.weights, cache, state.iteration)
    reference = dual_objective(tk, state.dense_alpha(tk.m)) if strict else dense.r2
    scale = max(abs(reference), np.finfo(float).tiny)
    mismatch = max(abs(state.r2 - reference), abs(dense.r2 - reference)) / scale
    if mismatch > RADIUS_TOLERANCE:
        message = (
            f"incremental r2={state.r2!r} disagrees with dense r2={reference!r} "
            f"(relative {mismatch:.3g}) at iteration {state.iteration}"
        )
        if strict:
            raise ConsistencyError(message)
        logger.warning(message)
    return dense


def dual_objective(tk: TildeKernel, alpha: np.ndarray) -> float:
    """g(alpha) = Delta^2 - alpha'K~alpha for a dense alpha"""
    support = np.flatnonzero(alpha)
    weights = alpha[support]
    return float(tk.delta2 - weights @ tk.block(support, support) @ weights)


def gradient(tk: TildeKernel, alpha: np.ndarray) -> np.ndarray:
    """Dense gradient -2 K~alpha of g"""
    support = np.flatnonzero(alpha)
    return -2.0 * tk.block(np.arange(tk.m), support) @ alpha[support]
