"""
Candidate search, line searches, state updates and the stop test.

Every function works for both kernel families: normalized kernels use the
closed forms in terms of r2 and gamma2, non-normalized kernels use the
exact quadratic maximizers along the step direction.
"""

import math
from dataclasses import replace
from typing import Iterable, Optional

import numpy as np

from src.config import SolverConfig
from src.kernels.cache import KernelCache, cache_get_column
from src.kernels.tilde import TildeKernel
from src.solvers.state import Candidate, DualState
from src.utils.errors import ConsistencyError, DegenerateDirectionError

SCAN_CHUNK_ROWS = 2048


def stop_threshold(epsilon: float) -> float:
    return (1.0 + epsilon) ** 2 - 1.0


def check_stop(delta_plus: float, epsilon: float) -> bool:
    """True when the furthest violation is inside the (1+eps)-dilated ball"""
    return delta_plus <= stop_threshold(epsilon)


def delta_plus_of(candidate: Candidate, state: DualState) -> float:
    if state.r2 <= 0:
        return math.inf
    return candidate.gamma2 / state.r2 - 1.0


def delta_minus_of(candidate: Candidate, state: DualState) -> float:
    if state.r2 <= 0:
        return 0.0
    return 1.0 - candidate.gamma2 / state.r2


def _block(tk: TildeKernel, rows, state: DualState, cache: Optional[KernelCache]) -> np.ndarray:
    if cache is None:
        return tk.block(rows, state.coreset)
    return cache.get_columns(tk, rows, state.coreset)


def gamma2(tk: TildeKernel, state: DualState, i: int, cache: Optional[KernelCache] = None) -> float:
    """
    Squared distance from z_i to the current center.

    For non-normalized kernels k~(x_i, x_i) replaces Delta^2, so the value
    is ||z_i - c||^2 exactly rather than the selection score.
    """
    if not 0 <= i < tk.m:
        raise IndexError(f"row {i} out of range for m={tk.m}")
    column = cache_get_column(cache, tk, i, state.coreset)
    kalpha = float(column @ state.weights)
    anchor = tk.delta2 if tk.normalized else float(tk.diag[i])
    return anchor + state.R - 2.0 * kalpha


def _best_of(rows: np.ndarray, scores: np.ndarray):
    """Position of the maximum score, smallest row index on ties"""
    top = scores.max()
    tied = np.flatnonzero(scores == top)
    return int(tied[np.argmin(rows[tied])])


def _scan(
    tk: TildeKernel, state: DualState, rows: np.ndarray, cache: Optional[KernelCache]
) -> Candidate:
    best = None
    for start in range(0, len(rows), SCAN_CHUNK_ROWS):
        chunk = rows[start:start + SCAN_CHUNK_ROWS]
        block = _block(tk, chunk, state, cache)
        kalpha = block @ state.weights
        scores = state.delta2 + state.R - 2.0 * kalpha
        k = _best_of(chunk, scores)
        if best is None or scores[k] > best.gamma2 or (scores[k] == best.gamma2 and chunk[k] < best.index):
            row = int(chunk[k])
            best = Candidate(row, float(scores[k]), float(kalpha[k]), float(tk.diag[row]), block[k].copy())
    return best


def furthest_candidate(
    tk: TildeKernel,
    state: DualState,
    config: SolverConfig,
    rng: np.random.Generator,
    cache: Optional[KernelCache] = None,
    exhaustive: bool = False
) -> Candidate:
    """
    Row maximizing Delta^2 + R - 2 (K~alpha)_i over a uniform sample of
    ``sample_size`` distinct rows, or over every row when ``exhaustive``
    is set or the sample would cover the whole set.

    The score is the gradient component of g up to a constant, so for
    non-normalized kernels this is the largest-gradient row.
    """
    if exhaustive or config.sample_size >= tk.m:
        rows = np.arange(tk.m, dtype=np.int64)
    else:
        rows = np.sort(rng.choice(tk.m, size=config.sample_size, replace=False)).astype(np.int64)
    return _scan(tk, state, rows, cache)


def nearest_in_coreset(tk: TildeKernel, state: DualState) -> Candidate:
    """Coreset row with the smallest score, from the maintained K~alpha"""
    if len(state.coreset) == 0:
        raise ConsistencyError("nearest_in_coreset on an empty coreset")
    scores = state.delta2 + state.R - 2.0 * state.kalpha
    k = _best_of(state.coreset, -scores)
    row = int(state.coreset[k])
    return Candidate(row, float(scores[k]), float(state.kalpha[k]), float(tk.diag[row]))


def fw_line_search(tk: TildeKernel, state: DualState, candidate: Candidate) -> float:
    """Exact maximizer of g((1 - lam) alpha + lam e_i) over [0, 1]"""
    if tk.normalized:
        if candidate.gamma2 <= 0:
            raise DegenerateDirectionError(f"row {candidate.index} coincides with the center")
        lam = 0.5 * (1.0 - state.r2 / candidate.gamma2)
    else:
        denominator = state.R - 2.0 * candidate.kalpha + candidate.diag
        if denominator <= 0:
            raise DegenerateDirectionError(f"row {candidate.index} coincides with the center")
        lam = (state.R - candidate.kalpha) / denominator
    return min(max(lam, 0.0), 1.0)


def away_line_search(tk: TildeKernel, state: DualState, candidate: Candidate, delta_minus: float) -> float:
    """Exact maximizer of g((1 + lam) alpha - lam e_j), capped to stay on the simplex"""
    weight = state.weight(candidate.index)
    if weight <= 0:
        raise ConsistencyError(f"away step from row {candidate.index} outside the coreset")
    if weight >= 1.0:
        raise DegenerateDirectionError("away step from a singleton coreset")
    bound = weight / (1.0 - weight)
    if tk.normalized:
        if delta_minus <= 0:
            return 0.0
        lam = delta_minus / (2.0 * (1.0 - delta_minus))
    else:
        denominator = state.R - 2.0 * candidate.kalpha + candidate.diag
        if denominator <= 0:
            raise DegenerateDirectionError(f"row {candidate.index} coincides with the center")
        lam = (candidate.kalpha - state.R) / denominator
    return min(max(lam, 0.0), bound)


def _radius(tk: TildeKernel, state: DualState, R: float, r2: float) -> tuple:
    if tk.normalized:
        return state.delta2 - r2, r2
    return R, state.delta2 - R


def fw_apply_step(
    tk: TildeKernel, state: DualState, candidate: Candidate, lam: float, delta_plus: float
) -> DualState:
    """
    alpha' = (1 - lam) alpha + lam e_i, with K~alpha and the radius updated
    in closed form. ``candidate.column`` must be aligned with the coreset.
    """
    if lam == 0.0:
        return state
    if candidate.column is None:
        raise ConsistencyError("FW step needs the candidate column")
    keep = 1.0 - lam
    weights = keep * state.weights
    kalpha = keep * state.kalpha + lam * candidate.column
    coreset = state.coreset
    position = state.position(candidate.index)
    if position is None:
        coreset = np.append(coreset, np.int64(candidate.index))
        weights = np.append(weights, lam)
        kalpha = np.append(kalpha, keep * candidate.kalpha + lam * candidate.diag)
    else:
        weights[position] += lam

    R = keep * keep * state.R + 2.0 * lam * keep * candidate.kalpha + lam * lam * candidate.diag
    if math.isfinite(delta_plus):
        r2 = state.r2 * (1.0 + delta_plus * delta_plus / (4.0 * (1.0 + delta_plus)))
        R, r2 = _radius(tk, state, R, r2)
    else:
        r2 = state.delta2 - R

    live = weights > 0.0
    if not live.all():
        coreset, weights, kalpha = coreset[live], weights[live], kalpha[live]
    return DualState(coreset, weights, kalpha, R, r2, state.delta2, state.iteration + 1)


def away_apply_step(
    tk: TildeKernel,
    state: DualState,
    candidate: Candidate,
    lam: float,
    zero_tolerance: float = 1e-12
) -> DualState:
    """
    alpha' = (1 + lam) alpha - lam e_j. A weight left at or below
    ``zero_tolerance`` is set to zero and its row leaves the coreset.
    """
    if lam == 0.0:
        return state
    if candidate.column is None:
        raise ConsistencyError("away step needs the candidate column")
    position = state.position(candidate.index)
    if position is None:
        raise ConsistencyError(f"away step from row {candidate.index} outside the coreset")
    grow = 1.0 + lam
    weights = grow * state.weights
    weights[position] -= lam
    kalpha = grow * state.kalpha - lam * candidate.column

    R = grow * grow * state.R - 2.0 * lam * grow * candidate.kalpha + lam * lam * candidate.diag
    r2 = grow * state.r2 - lam * grow * candidate.gamma2
    R, r2 = _radius(tk, state, R, r2)

    coreset = state.coreset
    if weights[position] <= zero_tolerance:
        live = np.ones(len(weights), dtype=bool)
        live[position] = False
        coreset, weights, kalpha = coreset[live], weights[live], kalpha[live]
    return DualState(coreset, weights, kalpha, R, r2, state.delta2, state.iteration + 1)


def with_column(tk: TildeKernel, state: DualState, candidate: Candidate,
                cache: Optional[KernelCache] = None) -> Candidate:
    """Attach the candidate's column over the current coreset"""
    return replace(candidate, column=cache_get_column(cache, tk, candidate.index, state.coreset))


def scores_for(tk: TildeKernel, state: DualState, rows: Iterable[int],
               cache: Optional[KernelCache] = None) -> np.ndarray:
    """Selection scores Delta^2 + R - 2 (K~alpha)_i for the given rows"""
    rows = np.asarray(list(rows), dtype=np.int64)
    return state.delta2 + state.R - 2.0 * (_block(tk, rows, state, cache) @ state.weights)
