"""
Dataset ingestion: LIBSVM parsing, one-versus-one decomposition and
corpus statistics.
"""

from src.data.libsvm import (
    SparseVector, Sample, Dataset, parse_features, parse_libsvm, serialize_libsvm, load_dataset
)
from src.data.ovo import BinarySubproblem, split_ovo, subproblem_sizes
from src.data.statistics import avg_sq_distance, random_split

__all__ = [
    'SparseVector', 'Sample', 'Dataset', 'parse_features', 'parse_libsvm', 'serialize_libsvm',
    'load_dataset', 'BinarySubproblem', 'split_ovo', 'subproblem_sizes',
    'avg_sq_distance', 'random_split',
]
