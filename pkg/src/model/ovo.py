"""
One-versus-one multiclass models: training over all class pairs and
majority-vote prediction.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.config import SolverConfig
from src.data.libsvm import Dataset, SparseVector
from src.data.ovo import BinarySubproblem, split_ovo, subproblem_sizes
from src.kernels.base import KernelSpec
from src.kernels.tilde import TildeKernel
from src.model.binary import BinaryModel, build_binary, dataset_matrix, rows_matrix
from src.solvers import TrainStats, TraceWriter, get_solver
from src.utils.errors import ConsistencyError, DataError
from src.utils.logger import get_logger, pair_context

logger = get_logger(__name__)


@dataclass(frozen=True)
class OvoModel:
    """Sorted class ids and one machine per unordered class pair"""
    classes: Tuple[int, ...]
    machines: Tuple[BinaryModel, ...]

    def __post_init__(self):
        if list(self.classes) != sorted(set(self.classes)) or len(self.classes) < 2:
            raise ConsistencyError(f"classes must be at least two sorted distinct ids, got {self.classes}")
        expected = set(combinations(self.classes, 2))
        pairs = [machine.pair for machine in self.machines]
        if len(pairs) != len(expected) or set(pairs) != expected:
            raise ConsistencyError(
                f"expected one machine per pair of {self.classes}, got pairs {pairs}"
            )

    @property
    def kernel(self) -> KernelSpec:
        return self.machines[0].kernel

    @property
    def C(self) -> float:
        return self.machines[0].C

    @property
    def num_features(self) -> int:
        return max(machine.vectors.shape[1] for machine in self.machines)

    def predict_matrix(self, matrix: sp.csr_matrix) -> np.ndarray:
        """Class id per row; the most votes wins, ties go to the smallest id"""
        position = {c: k for k, c in enumerate(self.classes)}
        votes = np.zeros((matrix.shape[0], len(self.classes)), dtype=np.int64)
        rows = np.arange(matrix.shape[0])
        for machine in self.machines:
            positive = machine.decision_values(matrix) >= 0.0
            winners = np.where(positive, position[machine.positive_class], position[machine.negative_class])
            np.add.at(votes, (rows, winners), 1)
        return np.asarray(self.classes, dtype=np.int64)[np.argmax(votes, axis=1)]

    def predict(self, dataset: Dataset) -> np.ndarray:
        return self.predict_matrix(dataset_matrix(dataset))


def predict_ovo(model: OvoModel, x: SparseVector) -> int:
    return int(model.predict_matrix(rows_matrix([x], model.num_features))[0])


def accuracy(model: OvoModel, dataset: Dataset) -> float:
    """Percentage of rows whose predicted class equals their label"""
    if len(dataset) == 0:
        raise DataError("cannot score an empty dataset")
    predicted = model.predict(dataset)
    return 100.0 * float(np.mean(predicted == dataset.labels))


def pair_trace_path(path: Optional[Union[str, Path]], subproblem: BinarySubproblem,
                    single: bool) -> Optional[Path]:
    """The trace file itself for binary corpora, a per-pair sibling otherwise"""
    if path is None:
        return None
    path = Path(path)
    if single:
        return path
    positive, negative = subproblem.pair
    return path.with_name(f"{path.stem}_{positive}_{negative}{path.suffix or '.csv'}")


def _train_pair(
    index: int,
    subproblem: BinarySubproblem,
    dataset: Dataset,
    kernel: KernelSpec,
    C: float,
    solver: str,
    config: SolverConfig,
    trace_path: Optional[Path],
    normalized: Optional[bool]
) -> Tuple[BinaryModel, TrainStats]:
    pair_config = config.with_seed(config.seed + index)
    tk = TildeKernel.build(kernel, dataset.matrix[subproblem.indices], subproblem.y, C, normalized=normalized)
    trainer = get_solver(solver)
    positive, negative = subproblem.pair
    with pair_context(positive, negative):
        logger.info(f"Training {solver} on {len(subproblem)} rows")
        if trace_path is not None:
            with TraceWriter(trace_path, keep=False) as trace:
                state, stats = trainer(tk, pair_config, trace=trace)
        else:
            state, stats = trainer(tk, pair_config)
    return build_binary(tk, state, subproblem, dataset), stats


def train_ovo(
    dataset: Dataset,
    kernel: KernelSpec,
    C: float,
    solver: str,
    config: SolverConfig,
    workers: int = 1,
    trace_path: Optional[Union[str, Path]] = None,
    normalized: Optional[bool] = None
) -> Tuple[OvoModel, List[TrainStats]]:
    """
    Train one machine per class pair. Pair k runs with seed
    ``config.seed + k``, so the result does not depend on ``workers``.
    """
    subproblems = split_ovo(dataset)
    if len(subproblems) > 1:
        largest, smallest = subproblem_sizes(subproblems)
        logger.info(f"{len(subproblems)} subproblems, sizes {smallest}..{largest}")
    single = len(subproblems) == 1
    jobs = [
        (k, subproblem, dataset, kernel, C, solver, config,
         pair_trace_path(trace_path, subproblem, single), normalized)
        for k, subproblem in enumerate(subproblems)
    ]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _train_pair(*job), jobs))
    else:
        results = [_train_pair(*job) for job in jobs]

    machines = tuple(machine for machine, _ in results)
    stats = [stat for _, stat in results]
    return OvoModel(tuple(dataset.classes), machines), stats
