"""
Binary classifier read off a solved ball dual.

The bias is folded into the kernel, so the decision function is
h(x) = sum_i coef_i (k(sv_i, x) + 1) with coef_i = alpha_i y_i.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from src.data.libsvm import Dataset, SparseVector
from src.data.ovo import BinarySubproblem
from src.kernels.base import KernelSpec, kernel_block
from src.kernels.tilde import TildeKernel
from src.solvers.state import DualState
from src.utils.errors import ConsistencyError, DataError

COEF_SUM_TOLERANCE = 1e-8


def rows_matrix(vectors: Sequence[SparseVector], num_features: int) -> sp.csr_matrix:
    """CSR matrix of sparse rows with at least ``num_features`` columns"""
    indptr = [0]
    indices, data = [], []
    width = num_features
    for vector in vectors:
        indices.extend(vector.indices)
        data.extend(vector.values)
        indptr.append(len(indices))
        width = max(width, vector.max_index + 1)
    return sp.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(vectors), max(width, 1))
    )


def _widen(matrix: sp.csr_matrix, width: int) -> sp.csr_matrix:
    if matrix.shape[1] >= width:
        return matrix
    return sp.csr_matrix((matrix.data, matrix.indices, matrix.indptr), shape=(matrix.shape[0], width))


def _sq_norms(matrix: sp.csr_matrix) -> np.ndarray:
    return np.asarray(matrix.multiply(matrix).sum(axis=1), dtype=np.float64).ravel()


@dataclass(frozen=True)
class BinaryModel:
    """
    One machine of a one-versus-one model. ``support`` pairs each support
    vector with its coefficient alpha_i y_i; no coefficient is zero.
    """
    kernel: KernelSpec
    C: float
    support: Tuple[Tuple[SparseVector, float], ...]
    positive_class: int
    negative_class: int

    def __post_init__(self):
        if not self.support:
            raise ConsistencyError(
                f"machine {self.positive_class}/{self.negative_class} has no support vectors"
            )
        if any(coef == 0.0 for _, coef in self.support):
            raise ConsistencyError("support vector with zero coefficient")

    def __len__(self) -> int:
        return len(self.support)

    @property
    def pair(self) -> Tuple[int, int]:
        return self.positive_class, self.negative_class

    @cached_property
    def coefs(self) -> np.ndarray:
        return np.array([coef for _, coef in self.support], dtype=np.float64)

    @cached_property
    def vectors(self) -> sp.csr_matrix:
        return rows_matrix([vector for vector, _ in self.support], 0)

    @cached_property
    def vector_sq_norms(self) -> np.ndarray:
        return _sq_norms(self.vectors)

    def decision_values(self, matrix: sp.csr_matrix) -> np.ndarray:
        """h(x) for every row of ``matrix``"""
        width = max(matrix.shape[1], self.vectors.shape[1])
        rows = _widen(sp.csr_matrix(matrix, dtype=np.float64), width)
        vectors = _widen(self.vectors, width)
        block = kernel_block(self.kernel, rows, vectors, _sq_norms(rows), self.vector_sq_norms)
        return (block + 1.0) @ self.coefs

    def label_for(self, value: float) -> int:
        """Zero votes for the positive class"""
        return self.positive_class if value >= 0.0 else self.negative_class


def build_binary(
    tk: TildeKernel, state: DualState, subproblem: BinarySubproblem, dataset: Dataset
) -> BinaryModel:
    """
    Support rows (alpha_i > 0) of ``state`` with coef = alpha_i y_i, in
    ascending row order. ``tk`` rows are the subproblem's rows.
    """
    if len(state) == 0:
        raise ConsistencyError("cannot build a model from an empty support")
    total = float(np.abs(state.weights).sum())
    if abs(total - 1.0) > COEF_SUM_TOLERANCE:
        raise ConsistencyError(f"support weights sum to {total!r}, expected 1")
    order = np.argsort(state.coreset, kind='stable')
    support = []
    for k in order:
        local = int(state.coreset[k])
        weight = float(state.weights[k])
        if weight <= 0.0:
            continue
        row = int(subproblem.indices[local])
        support.append((dataset.samples[row].features, weight * float(tk.y[local])))
    return BinaryModel(tk.base, tk.C, tuple(support), subproblem.positive_class, subproblem.negative_class)


def decision_value(model: BinaryModel, x: SparseVector) -> float:
    """h(x) = sum_i coef_i (k(sv_i, x) + 1)"""
    return float(model.decision_values(rows_matrix([x], model.vectors.shape[1]))[0])


def predict_binary(model: BinaryModel, x: SparseVector) -> int:
    return model.label_for(decision_value(model, x))


def dataset_matrix(dataset: Dataset) -> sp.csr_matrix:
    if len(dataset) == 0:
        raise DataError("empty dataset")
    return dataset.matrix
