"""
One-versus-one decomposition of a multiclass corpus into binary subproblems.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from src.data.libsvm import Dataset
from src.utils.errors import UsageError


@dataclass(frozen=True)
class BinarySubproblem:
    """
    Rows of two classes relabelled to +1 / -1.

    The class with the smaller id is always the positive side, so a pair
    has one canonical orientation across runs.
    """
    positive_class: int
    negative_class: int
    rows: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not self.positive_class < self.negative_class:
            raise UsageError(
                f"positive class {self.positive_class} must precede negative class {self.negative_class}"
            )

    def __len__(self) -> int:
        return len(self.rows)

    @cached_property
    def indices(self) -> np.ndarray:
        return np.array([row for row, _ in self.rows], dtype=np.int64)

    @cached_property
    def y(self) -> np.ndarray:
        return np.array([label for _, label in self.rows], dtype=np.float64)

    @property
    def pair(self) -> Tuple[int, int]:
        return self.positive_class, self.negative_class


def split_ovo(dataset: Dataset) -> List[BinarySubproblem]:
    """
    One subproblem per unordered class pair, ordered lexicographically by pair.

    Raises UsageError when the corpus has fewer than two classes.
    """
    if len(dataset.classes) < 2:
        raise UsageError(f"one-versus-one needs at least 2 classes, got {len(dataset.classes)}")

    labels = dataset.labels
    subproblems = []
    for positive, negative in combinations(dataset.classes, 2):
        selected = np.flatnonzero((labels == positive) | (labels == negative))
        rows = tuple((int(i), 1 if labels[i] == positive else -1) for i in selected)
        subproblems.append(BinarySubproblem(positive, negative, rows))
    return subproblems


def subproblem_sizes(subproblems: Sequence[BinarySubproblem]) -> Tuple[int, int]:
    """Row counts of the largest and the smallest subproblem"""
    if not subproblems:
        raise UsageError("no subproblems")
    sizes = [len(s) for s in subproblems]
    return max(sizes), min(sizes)
