import numpy as np
import pytest

from src.data.statistics import avg_sq_distance, random_split
from src.data.synthetic import from_arrays, make_blobs, make_uniform_cube
from src.utils.errors import DataError, UsageError


def test_single_pair():
    dataset = from_arrays(np.array([[0.0, 0.0], [2.0, 0.0]]), [1, -1])
    assert avg_sq_distance(dataset) == pytest.approx(4.0)


def test_three_collinear_points():
    dataset = from_arrays(np.array([[0.0], [1.0], [2.0]]), [1, -1, 1])
    assert avg_sq_distance(dataset) == pytest.approx(2.0)


def test_single_row_rejected():
    with pytest.raises(DataError):
        avg_sq_distance(from_arrays(np.array([[1.0]]), [1]))


def test_sampled_estimate_within_three_standard_errors():
    dataset = make_uniform_cube(5000, dim=3, seed=11)
    points = dataset.matrix.toarray()
    m = len(points)
    norms = (points ** 2).sum(axis=1)
    total = points.sum(axis=0)
    exact = (m * norms.sum() - total @ total) / (m * (m - 1) / 2)

    pairs = 100_000
    estimate = avg_sq_distance(dataset, sample_pairs=pairs, seed=3)
    rng = np.random.default_rng(0)
    first = rng.integers(0, m, size=20_000)
    second = (first + rng.integers(1, m, size=20_000)) % m
    spread = ((points[first] - points[second]) ** 2).sum(axis=1).std()
    assert abs(estimate - exact) <= 3.0 * spread / np.sqrt(pairs)


def test_random_split_sizes_and_classes():
    dataset = make_blobs(20, num_classes=2, seed=0)
    kept, held = random_split(dataset, 0.3, seed=4)
    assert len(held) == 6
    assert len(kept) == 14
    assert kept.classes == held.classes == dataset.classes
    assert sorted(kept.samples + held.samples, key=id) == sorted(dataset.samples, key=id)


def test_random_split_is_seeded():
    dataset = make_blobs(20, num_classes=2, seed=0)
    assert random_split(dataset, 0.3, seed=4) == random_split(dataset, 0.3, seed=4)


def test_random_split_fraction_checked():
    with pytest.raises(UsageError):
        random_split(make_blobs(10, seed=0), 1.0)
