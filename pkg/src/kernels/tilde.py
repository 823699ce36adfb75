"""
The labelled, regularised kernel of the ball reduction:

    k~(x_i, x_j) = y_i y_j (k(x_i, x_j) + 1) + [i == j] / C

It turns the L2-SVM dual into a problem over the unit simplex. With a
normalized base kernel its diagonal is the constant 2 + 1/C, and the dual
is exactly a minimal-enclosing-ball dual.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from src.data.libsvm import Dataset
from src.data.ovo import BinarySubproblem
from src.kernels.base import KernelSpec, kernel_block
from src.utils.errors import ConsistencyError, UsageError

DIAGONAL_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class TildeKernel:
    """
    k~ over the m rows of one binary problem.

    ``delta2`` is the constant Delta^2 of the objective g(a) = Delta^2 - a'K~a:
    the common diagonal for normalized kernels, the largest diagonal entry
    otherwise, so g stays non-negative on the simplex. ``normalized`` picks
    the closed forms used by the solvers and may be forced off to run the
    general path on a normalized kernel.
    """
    base: KernelSpec
    C: float
    matrix: sp.csr_matrix
    y: np.ndarray
    sq_norms: np.ndarray
    self_kernel: np.ndarray
    diag: np.ndarray
    delta2: float
    normalized: bool

    @classmethod
    def build(
        cls,
        base: KernelSpec,
        matrix: sp.csr_matrix,
        y: Sequence[float],
        C: float,
        normalized: Optional[bool] = None
    ) -> 'TildeKernel':
        if not C > 0:
            raise UsageError(f"C must be > 0, got {C}")
        matrix = sp.csr_matrix(matrix, dtype=np.float64)
        matrix.sort_indices()
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (matrix.shape[0],):
            raise UsageError(f"expected {matrix.shape[0]} labels, got {y.shape}")
        if not np.all(np.abs(y) == 1.0):
            raise UsageError("labels of a binary problem must be +1 or -1")
        sq_norms = np.asarray(matrix.multiply(matrix).sum(axis=1), dtype=np.float64).ravel()
        self_kernel = np.asarray(base.self_value(sq_norms), dtype=np.float64)
        diag = y * y * (self_kernel + 1.0) + 1.0 / C
        is_normalized = base.normalized if normalized is None else bool(normalized) and base.normalized
        tk = cls(
            base=base, C=float(C), matrix=matrix, y=y, sq_norms=sq_norms,
            self_kernel=self_kernel, diag=diag,
            delta2=float(diag.max()) if len(diag) else 0.0,
            normalized=is_normalized
        )
        tilde_diag(tk)
        return tk

    @classmethod
    def from_subproblem(
        cls, base: KernelSpec, dataset: Dataset, subproblem: BinarySubproblem, C: float
    ) -> 'TildeKernel':
        return cls.build(base, dataset.matrix[subproblem.indices], subproblem.y, C)

    @classmethod
    def from_binary_dataset(cls, base: KernelSpec, dataset: Dataset, C: float) -> 'TildeKernel':
        """Two-class dataset; the smaller class id becomes +1"""
        if len(dataset.classes) != 2:
            raise UsageError(f"expected 2 classes, got {len(dataset.classes)}")
        y = np.where(dataset.labels == dataset.classes[0], 1.0, -1.0)
        return cls.build(base, dataset.matrix, y, C)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Dense k~ block of shape (len(rows), len(cols))"""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        values = kernel_block(
            self.base, self.matrix[rows], self.matrix[cols],
            self.sq_norms[rows], self.sq_norms[cols]
        )
        same = rows[:, None] == cols[None, :]
        has_diagonal = same.any()
        if has_diagonal:
            # identical rows use the exact self value so the diagonal matches self.diag
            values[same] = np.broadcast_to(self.self_kernel[rows][:, None], same.shape)[same]
        out = np.outer(self.y[rows], self.y[cols]) * (values + 1.0)
        if has_diagonal:
            out[same] += 1.0 / self.C
        return out

    def gram(self, rows: Optional[Sequence[int]] = None) -> np.ndarray:
        """Dense k~ Gram matrix over ``rows`` (all rows by default)"""
        rows = np.arange(self.m) if rows is None else rows
        return self.block(rows, rows)


def tilde_eval(tk: TildeKernel, i: int, j: int) -> float:
    """k~(x_i, x_j)"""
    for index in (i, j):
        if not 0 <= index < tk.m:
            raise IndexError(f"row {index} out of range for {tk.m} rows")
    return float(tk.block([i], [j])[0, 0])


def tilde_diag(tk: TildeKernel) -> Tuple[np.ndarray, float]:
    """
    The k~ diagonal and Delta^2.

    Raises ConsistencyError when a kernel flagged normalized has a
    non-constant diagonal.
    """
    if tk.base.normalized and len(tk.diag):
        spread = float(tk.diag.max() - tk.diag.min())
        if spread > DIAGONAL_TOLERANCE:
            raise ConsistencyError(f"normalized kernel with diagonal spread {spread:.3g}")
    return tk.diag, tk.delta2
