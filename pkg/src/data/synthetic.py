"""
Seeded synthetic corpora for tests, demos and desk-scale benchmarks.
"""

from typing import Sequence

import numpy as np

from src.data.libsvm import Dataset, Sample, SparseVector


def from_arrays(points: np.ndarray, labels: Sequence[int]) -> Dataset:
    """Wrap a dense point array and integer labels as a Dataset"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    samples = [
        Sample(SparseVector.from_dense(row), int(label))
        for row, label in zip(points, labels)
    ]
    return Dataset.from_samples(samples, num_features=points.shape[1])


def make_blobs(
    m: int,
    num_classes: int = 2,
    dim: int = 2,
    spread: float = 1.0,
    separation: float = 3.0,
    seed: int = 0
) -> Dataset:
    """Gaussian blobs, one per class, centers drawn on a scaled cube"""
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-separation, separation, size=(num_classes, dim))
    labels = np.arange(m) % num_classes
    points = centers[labels] + rng.normal(scale=spread, size=(m, dim))
    class_ids = [1, -1] if num_classes == 2 else list(range(num_classes))
    return from_arrays(points, [class_ids[c] for c in labels])


def make_xor() -> Dataset:
    """The four-point XOR problem"""
    points = np.array([[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
    return from_arrays(points, [1, 1, -1, -1])


def make_uniform_cube(m: int, dim: int = 3, seed: int = 0) -> Dataset:
    """Points uniform in the unit cube, labels alternating"""
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, 1.0, size=(m, dim))
    return from_arrays(points, [1 if i % 2 == 0 else -1 for i in range(m)])
