"""
Corpus statistics and seeded splits.
"""

from typing import Tuple

import numpy as np

from src.data.libsvm import Dataset
from src.utils.errors import DataError, UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Above this many rows the pairwise mean is estimated by sampling.
EXACT_PAIRS_LIMIT = 2000


def row_sq_norms(dataset: Dataset) -> np.ndarray:
    matrix = dataset.matrix
    return np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel()


def avg_sq_distance(dataset: Dataset, sample_pairs: int = 100_000, seed: int = 0) -> float:
    """
    Mean squared Euclidean distance between distinct training rows.

    Exact over all i<j pairs when m <= 2000, otherwise a Monte-Carlo mean
    over ``sample_pairs`` uniformly drawn pairs of distinct rows.
    """
    m = len(dataset)
    if m < 2:
        raise DataError("average squared distance needs at least two rows")
    if sample_pairs < 1:
        raise UsageError(f"sample_pairs must be >= 1, got {sample_pairs}")

    matrix = dataset.matrix
    norms = row_sq_norms(dataset)

    if m <= EXACT_PAIRS_LIMIT:
        # sum_{i<j} |xi - xj|^2 = m * sum |xi|^2 - |sum xi|^2
        total = np.asarray(matrix.sum(axis=0)).ravel()
        pair_sum = m * norms.sum() - float(total @ total)
        return max(pair_sum, 0.0) / (m * (m - 1) / 2)

    rng = np.random.default_rng(seed)
    first = rng.integers(0, m, size=sample_pairs)
    # offset in [1, m-1] keeps the second row distinct from the first
    second = (first + rng.integers(1, m, size=sample_pairs)) % m
    dots = np.asarray(matrix[first].multiply(matrix[second]).sum(axis=1)).ravel()
    distances = np.maximum(norms[first] + norms[second] - 2.0 * dots, 0.0)
    estimate = float(distances.mean())
    logger.debug(f"Sampled {sample_pairs} pairs over {m} rows: mean squared distance {estimate:.6g}")
    return estimate


def random_split(dataset: Dataset, fraction: float, seed: int = 0) -> Tuple[Dataset, Dataset]:
    """
    Seeded partition into (kept, held_out); held_out has round(fraction * m) rows.

    Both sides keep at least one row and the parent's class set; rows keep
    their original relative order.
    """
    m = len(dataset)
    if not 0.0 < fraction < 1.0:
        raise UsageError(f"split fraction must lie in (0, 1), got {fraction}")
    if m < 2:
        raise DataError("cannot split a dataset with fewer than two rows")

    held = min(max(int(round(fraction * m)), 1), m - 1)
    order = np.random.default_rng(seed).permutation(m)
    held_rows = np.sort(order[:held])
    kept_rows = np.sort(order[held:])
    return dataset.subset(kept_rows.tolist()), dataset.subset(held_rows.tolist())
