"""
Base kernel functions on sparse rows.

Every kernel here is a function of the dot product and the two squared
norms, so one transform serves both the scalar path on SparseVectors and
the vectorised path on CSR blocks.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.data.libsvm import SparseVector
from src.utils.errors import UsageError

RBF = 'rbf'
LINEAR = 'linear'
POLY = 'poly'
POLYH = 'polyh'
KINDS = (RBF, LINEAR, POLY, POLYH)


@dataclass(frozen=True)
class KernelSpec:
    """
    Base kernel choice and its parameters.

    rbf:    exp(-|a-b|^2 / (2 sigma2))
    linear: a.b
    poly:   (a.b + 1)^degree
    polyh:  (gamma a.b)^degree
    """
    kind: str
    sigma2: Optional[float] = None
    degree: Optional[int] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"Unknown kernel: {self.kind}")
        if self.kind == RBF and not (self.sigma2 is not None and self.sigma2 > 0):
            raise UsageError(f"rbf kernel needs sigma2 > 0, got {self.sigma2}")
        if self.kind in (POLY, POLYH) and not (self.degree is not None and int(self.degree) >= 1):
            raise UsageError(f"{self.kind} kernel needs degree >= 1, got {self.degree}")
        if self.kind == POLYH and not (self.gamma is not None and self.gamma > 0):
            raise UsageError(f"polyh kernel needs gamma > 0, got {self.gamma}")

    @classmethod
    def rbf(cls, sigma2: float) -> 'KernelSpec':
        return cls(RBF, sigma2=float(sigma2))

    @classmethod
    def linear(cls) -> 'KernelSpec':
        return cls(LINEAR)

    @classmethod
    def poly(cls, degree: int) -> 'KernelSpec':
        return cls(POLY, degree=int(degree))

    @classmethod
    def polyh(cls, gamma: float, degree: int) -> 'KernelSpec':
        return cls(POLYH, gamma=float(gamma), degree=int(degree))

    @property
    def normalized(self) -> bool:
        """True when k(x, x) is the same constant for every x"""
        return self.kind == RBF

    def describe(self) -> str:
        """Textual form used in model files"""
        if self.kind == RBF:
            return f"rbf sigma2={self.sigma2!r}"
        if self.kind == POLY:
            return f"poly degree={self.degree}"
        if self.kind == POLYH:
            return f"polyh gamma={self.gamma!r} degree={self.degree}"
        return 'linear'

    @classmethod
    def parse(cls, text: str) -> 'KernelSpec':
        """Inverse of describe()"""
        tokens = text.split()
        if not tokens:
            raise UsageError("empty kernel description")
        kind, params = tokens[0], {}
        for token in tokens[1:]:
            key, sep, value = token.partition('=')
            if not sep:
                raise UsageError(f"malformed kernel parameter '{token}'")
            params[key] = value
        try:
            if kind == RBF:
                return cls.rbf(float(params['sigma2']))
            if kind == LINEAR:
                return cls.linear()
            if kind == POLY:
                return cls.poly(int(params['degree']))
            if kind == POLYH:
                return cls.polyh(float(params['gamma']), int(params['degree']))
        except KeyError as e:
            raise UsageError(f"kernel '{kind}' is missing parameter {e}") from None
        except ValueError as e:
            raise UsageError(f"bad kernel parameter in '{text}': {e}") from None
        raise UsageError(f"Unknown kernel: {kind}")

    def from_dot(self, dots, sq_a, sq_b):
        """Apply the kernel to dot products and squared norms (scalars or broadcastable arrays)"""
        if self.kind == RBF:
            sq_dist = np.maximum(sq_a + sq_b - 2.0 * dots, 0.0)
            return np.exp(-sq_dist / (2.0 * self.sigma2))
        if self.kind == LINEAR:
            return dots
        if self.kind == POLY:
            return (dots + 1.0) ** self.degree
        return (self.gamma * dots) ** self.degree

    def self_value(self, sq_norms):
        """k(x, x) from squared norms; exactly 1 for rbf"""
        if self.kind == RBF:
            return np.ones_like(np.asarray(sq_norms, dtype=np.float64))
        return self.from_dot(sq_norms, sq_norms, sq_norms)


def kernel_eval(spec: KernelSpec, a: SparseVector, b: SparseVector) -> float:
    """k(a, b) on two sparse rows"""
    dot = a.dot(b)
    if spec.kind == RBF:
        return float(spec.from_dot(dot, a.squared_norm(), b.squared_norm()))
    return float(spec.from_dot(dot, 0.0, 0.0))


def kernel_block(
    spec: KernelSpec,
    rows: sp.csr_matrix,
    cols: sp.csr_matrix,
    row_sq_norms: np.ndarray,
    col_sq_norms: np.ndarray
) -> np.ndarray:
    """Dense block k(rows[a], cols[b]) of shape (rows, cols)"""
    dots = (rows @ cols.T).toarray()
    return spec.from_dot(dots, row_sq_norms[:, None], col_sq_norms[None, :])
