"""
Pairwise (SMO-style) solver for the ball dual restricted to a row subset:

    maximize  Delta^2 - a'Ga   subject to  a >= 0, sum(a) = 1

where G is the k~ Gram matrix over the subset.
"""

from typing import Optional, Sequence

import numpy as np

from src.kernels.cache import KernelCache
from src.kernels.tilde import TildeKernel
from src.solvers.state import coreset_gram
from src.utils.errors import NonConvergenceError, UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)

REFRESH_EVERY = 1000
CURVATURE_FLOOR = 1e-300


def reduced_qp_solve(
    tk: TildeKernel,
    index_set: Sequence[int],
    warm_alpha: Sequence[float],
    inner_eps: float,
    iter_cap: int,
    gram: Optional[np.ndarray] = None,
    cache: Optional[KernelCache] = None,
    counter: Optional[list] = None
) -> np.ndarray:
    """
    Solve the restricted dual from ``warm_alpha``.

    Each step moves mass from the support row with the largest (G a)_j to
    the row with the smallest (G a)_i, by the exact two-variable maximizer.
    Stops once 2 * (max_j - min_i) <= inner_eps * g(a), the gap between the
    largest and smallest gradient components that can still move.

    Raises NonConvergenceError carrying the last iterate after
    ``iter_cap`` pairwise steps. ``counter``, when given, receives the
    number of steps taken.
    """
    index_set = np.asarray(index_set, dtype=np.int64)
    alpha = np.array(warm_alpha, dtype=np.float64)
    size = len(index_set)
    if size == 0:
        raise UsageError("reduced QP over an empty index set")
    if alpha.shape != (size,):
        raise UsageError(f"warm start has shape {alpha.shape}, expected ({size},)")
    if np.any(alpha < 0) or abs(alpha.sum() - 1.0) > 1e-10:
        raise UsageError("warm start is not on the simplex")
    if size == 1:
        return np.ones(1)

    if gram is None:
        gram = coreset_gram(tk, index_set, cache)
    curvature_diag = np.diag(gram)
    kalpha = gram @ alpha

    steps = 0
    while True:
        if steps % REFRESH_EVERY == 0 and steps:
            kalpha = gram @ alpha
        objective = tk.delta2 - float(alpha @ kalpha)

        i = int(np.argmin(kalpha))
        movable = np.flatnonzero(alpha > 0)
        j = int(movable[np.argmax(kalpha[movable])])
        gap = 2.0 * (kalpha[j] - kalpha[i])
        if gap <= inner_eps * objective:
            break
        if steps >= iter_cap:
            if counter is not None:
                counter.append(steps)
            raise NonConvergenceError(
                f"reduced QP over {size} rows did not converge in {iter_cap} steps "
                f"(gap {gap:.3g}, target {inner_eps * objective:.3g})",
                alpha=alpha, iterations=steps
            )

        curvature = max(curvature_diag[i] + curvature_diag[j] - 2.0 * gram[i, j], CURVATURE_FLOOR)
        t = min((kalpha[j] - kalpha[i]) / curvature, alpha[j])
        if t >= alpha[j]:
            t = alpha[j]
            alpha[j] = 0.0
        else:
            alpha[j] -= t
        alpha[i] += t
        kalpha += t * (gram[:, i] - gram[:, j])
        steps += 1

    if counter is not None:
        counter.append(steps)
    logger.debug(f"Reduced QP over {size} rows converged in {steps} steps")
    return alpha
