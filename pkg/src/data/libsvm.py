"""
Sparse dataset types and the LIBSVM text format.

Indices are 1-based on disk and 0-based in memory; the parser and the
serializer are the only places that convert between the two.
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import math

import numpy as np
import scipy.sparse as sp

from src.utils.errors import DataError, ParseError
from src.utils.file_operations import read_file
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class SparseVector:
    """Sparse feature row with strictly increasing 0-based indices and no stored zeros"""
    indices: Tuple[int, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values differ in length")
        previous = -1
        for index, value in zip(self.indices, self.values):
            if index <= previous:
                raise ValueError(f"indices must be strictly increasing, got {index} after {previous}")
            if value == 0.0:
                raise ValueError(f"explicit zero stored at index {index}")
            previous = index

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, float]]) -> 'SparseVector':
        """Build from (0-based index, value) pairs, dropping zeros"""
        kept = [(int(i), float(v)) for i, v in pairs if float(v) != 0.0]
        return cls(tuple(i for i, _ in kept), tuple(v for _, v in kept))

    @classmethod
    def from_dense(cls, values: Sequence[float]) -> 'SparseVector':
        return cls.from_pairs(enumerate(values))

    def __len__(self) -> int:
        return len(self.indices)

    def items(self) -> Iterable[Tuple[int, float]]:
        return zip(self.indices, self.values)

    @property
    def max_index(self) -> int:
        """Largest stored 0-based index, -1 for the empty row"""
        return self.indices[-1] if self.indices else -1

    def dot(self, other: 'SparseVector') -> float:
        """Sparse dot product; disjoint indices are skipped"""
        total = 0.0
        a, b = 0, 0
        ia, ib = self.indices, other.indices
        while a < len(ia) and b < len(ib):
            if ia[a] == ib[b]:
                total += self.values[a] * other.values[b]
                a += 1
                b += 1
            elif ia[a] < ib[b]:
                a += 1
            else:
                b += 1
        return total

    def squared_norm(self) -> float:
        return self.dot(self)

    def to_libsvm(self) -> str:
        return ' '.join(f"{i + 1}:{v!r}" for i, v in self.items())


@dataclass(frozen=True)
class Sample:
    """One labelled row"""
    features: SparseVector
    label: int


@dataclass(frozen=True)
class Dataset:
    """
    Immutable training or test corpus.

    ``num_features`` is the number of feature columns (largest 1-based index
    seen) and ``classes`` the sorted distinct labels. Subsets built with
    :meth:`subset` keep the parent's feature count and class set.
    """
    samples: Tuple[Sample, ...]
    num_features: int
    classes: Tuple[int, ...]

    def __post_init__(self):
        if not self.classes:
            raise DataError("dataset has no classes")
        if list(self.classes) != sorted(set(self.classes)):
            raise DataError("classes must be sorted and distinct")
        class_set = set(self.classes)
        for sample in self.samples:
            if sample.label not in class_set:
                raise DataError(f"label {sample.label} not among classes {self.classes}")
            if sample.features.max_index >= self.num_features:
                raise DataError(
                    f"feature index {sample.features.max_index + 1} exceeds num_features {self.num_features}"
                )

    @classmethod
    def from_samples(
        cls,
        samples: Sequence[Sample],
        num_features: Optional[int] = None,
        classes: Optional[Sequence[int]] = None
    ) -> 'Dataset':
        samples = tuple(samples)
        if num_features is None:
            num_features = max((s.features.max_index + 1 for s in samples), default=0)
        if classes is None:
            classes = sorted({s.label for s in samples})
        return cls(samples, num_features, tuple(classes))

    def __len__(self) -> int:
        return len(self.samples)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=np.int64)

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        """CSR view of the features, shape (m, num_features)"""
        indptr = [0]
        indices: List[int] = []
        data: List[float] = []
        for sample in self.samples:
            indices.extend(sample.features.indices)
            data.extend(sample.features.values)
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
            shape=(len(self.samples), max(self.num_features, 1))
        )

    def subset(self, rows: Sequence[int]) -> 'Dataset':
        return Dataset(tuple(self.samples[i] for i in rows), self.num_features, self.classes)


def _parse_label(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"malformed label '{token}'", line_number) from None
    if not math.isfinite(value) or value != int(value):
        raise ParseError(f"non-integer label '{token}'", line_number)
    return int(value)


def _parse_entry(token: str, line_number: int) -> Tuple[int, float]:
    index_text, sep, value_text = token.partition(':')
    if not sep:
        raise ParseError(f"malformed token '{token}'", line_number)
    try:
        index = int(index_text)
    except ValueError:
        raise ParseError(f"malformed index '{index_text}'", line_number) from None
    if index < 1:
        raise ParseError(f"index {index} is not positive", line_number)
    try:
        value = float(value_text)
    except ValueError:
        raise ParseError(f"non-numeric value '{value_text}'", line_number) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value '{value_text}'", line_number)
    return index, value


def parse_features(tokens: Sequence[str], line_number: int) -> Tuple[SparseVector, int]:
    """
    Parse 'idx:val' tokens into a row. Returns the row and its width, the
    largest kept 1-based index (explicit zeros are dropped; 0 for an empty row).
    """
    pairs = []
    previous = 0
    for token in tokens:
        index, value = _parse_entry(token, line_number)
        if index <= previous:
            raise ParseError("non-increasing index", line_number)
        previous = index
        if value != 0.0:
            pairs.append((index - 1, value))
    features = SparseVector.from_pairs(pairs)
    return features, features.max_index + 1


def parse_libsvm(text_stream: Union[str, Iterable[str]]) -> Dataset:
    """
    Parse LIBSVM text (``label idx:val idx:val ...``).

    Blank lines and lines starting with ``#`` are skipped. Explicit zero
    values are dropped. Raises ParseError naming the 1-based line number
    for malformed tokens, non-increasing indices and non-numeric values.
    """
    lines = text_stream.splitlines() if isinstance(text_stream, str) else text_stream
    samples: List[Sample] = []
    num_features = 0
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        label = _parse_label(tokens[0], line_number)
        features, width = parse_features(tokens[1:], line_number)
        num_features = max(num_features, width)
        samples.append(Sample(features, label))

    if not samples:
        raise DataError("no samples found")
    return Dataset.from_samples(samples, num_features=num_features)


def serialize_libsvm(dataset: Dataset) -> str:
    """Inverse of parse_libsvm; reals written as shortest round-trip decimals"""
    lines = []
    for sample in dataset.samples:
        body = sample.features.to_libsvm()
        lines.append(f"{sample.label} {body}".rstrip())
    return ''.join(f"{line}\n" for line in lines)


def load_dataset(path: Union[str, Path]) -> Dataset:
    """Read and parse a LIBSVM file"""
    dataset = parse_libsvm(read_file(path))
    logger.info(
        f"Loaded {path}: {len(dataset)} rows, {dataset.num_features} features, "
        f"{len(dataset.classes)} classes"
    )
    return dataset
