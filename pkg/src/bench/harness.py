"""
Benchmark orchestration: train every requested solver on the same data
with the same kernel, C, tolerance and seed, then score and compare them.
Also hosts the C grid sweep on a held-out validation split.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.bench.report import BenchReport, BenchRow
from src.config import AUTO, KernelConfig, SolverConfig, build_solver_config
from src.data.libsvm import Dataset, load_dataset
from src.data.statistics import random_split
from src.model.ovo import accuracy, train_ovo
from src.solvers import SOLVERS
from src.utils.errors import UsageError
from src.utils.file_operations import ensure_directory, read_file
from src.utils.logger import get_logger

logger = get_logger(__name__)

C_GRID = tuple(2.0 ** k for k in range(13))
VALIDATION_FRACTION = 0.3
TEST_FRACTION = 0.2


class BenchDataset(BaseModel):
    """One corpus of a suite; without a test file a seeded split is held out"""
    name: str
    train: str
    test: Optional[str] = None
    test_fraction: float = Field(default=TEST_FRACTION, gt=0.0, lt=1.0)
    kernel: str = 'rbf'
    sigma2: Union[float, str] = AUTO
    gamma: Union[float, str] = AUTO
    degree: int = Field(default=2, ge=1)
    C: float = Field(gt=0.0)

    @field_validator('sigma2', 'gamma')
    @classmethod
    def _positive_or_auto(cls, value):
        if isinstance(value, str) and value != AUTO:
            raise ValueError(f"expected a positive number or '{AUTO}', got '{value}'")
        if not isinstance(value, str) and value <= 0:
            raise ValueError("must be positive")
        return value

    def kernel_config(self) -> KernelConfig:
        return KernelConfig(kind=self.kernel, sigma2=self.sigma2, gamma=self.gamma, degree=self.degree)


class BenchSuite(BaseModel):
    """A named list of corpora, the solvers to compare and solver overrides"""
    name: str
    solvers: List[str] = Field(default_factory=lambda: ['bc', 'fw', 'mfw'])
    solver: Dict[str, Any] = Field(default_factory=dict)
    datasets: List[BenchDataset]

    @model_validator(mode='after')
    def _known_solvers(self):
        unknown = [s for s in self.solvers if s not in SOLVERS]
        if unknown:
            raise ValueError(f"unknown solvers {unknown}, expected some of {sorted(SOLVERS)}")
        return self


def load_suite(path: Union[str, Path], name: str) -> BenchSuite:
    """Read suite ``name`` from a benchmarks YAML file"""
    loaded = yaml.safe_load(read_file(path)) or {}
    suites = loaded.get('suites', {})
    if name not in suites:
        raise UsageError(f"suite '{name}' not found in {path}; available: {sorted(suites)}")
    try:
        return BenchSuite(name=name, **suites[name])
    except ValidationError as e:
        raise UsageError(f"invalid suite '{name}': {e}") from None


class BenchRunner:
    """Runs solvers over corpora and collects a BenchReport"""

    def __init__(
        self,
        solver_config: SolverConfig,
        workers: int = 1,
        trace_dir: Optional[Path] = None,
        data_dir: Optional[Path] = None
    ):
        self.solver_config = solver_config
        self.workers = workers
        self.trace_dir = Path(trace_dir) if trace_dir else None
        self.data_dir = Path(data_dir) if data_dir else None
        if self.trace_dir is not None:
            ensure_directory(self.trace_dir)

    def _resolve(self, path: str) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and self.data_dir is not None and not candidate.exists():
            return self.data_dir / candidate
        return candidate

    def run_dataset(
        self,
        name: str,
        train: Dataset,
        test: Dataset,
        kernel_config: KernelConfig,
        C: float,
        solvers: Sequence[str],
        report: Optional[BenchReport] = None
    ) -> BenchReport:
        report = report if report is not None else BenchReport()
        kernel = kernel_config.resolve(train, seed=self.solver_config.seed)
        for solver in solvers:
            if solver == 'bc' and not kernel.normalized:
                logger.warning(
                    f"{name}: skipping bc, the core vector machine needs a normalized kernel "
                    f"and {kernel.kind} is not"
                )
                continue
            trace = self.trace_dir / f"{name}_{solver}.csv" if self.trace_dir else None
            model, stats = train_ovo(train, kernel, C, solver, self.solver_config, self.workers, trace)
            converged = all(s.converged for s in stats)
            if not converged:
                logger.warning(f"{name}: {solver} stopped at max_iterations on some subproblem")
            row = BenchRow(
                dataset=name,
                solver=solver,
                accuracy=accuracy(model, test),
                time_s=sum(s.wall_time_seconds for s in stats),
                coreset=sum(s.coreset_size for s in stats),
                iters=sum(s.iterations for s in stats),
                converged=converged
            )
            logger.info(
                f"{name} {solver}: accuracy {row.accuracy:.2f}%, {row.time_s:.3f}s, "
                f"coreset {row.coreset}, {row.iters} iterations"
            )
            report.add(row)
        return report

    def load_pair(self, entry: BenchDataset, seed: int):
        train = load_dataset(self._resolve(entry.train))
        if entry.test:
            return train, load_dataset(self._resolve(entry.test))
        logger.info(f"{entry.name}: no test file, holding out {entry.test_fraction:.0%} of the rows")
        return random_split(train, entry.test_fraction, seed)

    def run_suite(self, suite: BenchSuite) -> BenchReport:
        if suite.solver:
            self.solver_config = build_solver_config(suite.solver, self.solver_config)
        report = BenchReport()
        for entry in suite.datasets:
            train, test = self.load_pair(entry, self.solver_config.seed)
            self.run_dataset(entry.name, train, test, entry.kernel_config(), entry.C, suite.solvers, report)
        return report

    @staticmethod
    def write(report: BenchReport, csv_path: Union[str, Path]) -> Path:
        """CSV at ``csv_path`` plus summary.md beside it"""
        csv_path = Path(csv_path)
        report.write_csv(csv_path)
        report.write_summary(csv_path.parent / 'summary.md')
        return csv_path


def sweep_c(
    dataset: Dataset,
    kernel_config: KernelConfig,
    solvers: Sequence[str],
    solver_config: SolverConfig,
    grid: Sequence[float] = C_GRID,
    fraction: float = VALIDATION_FRACTION,
    workers: int = 1
) -> pd.DataFrame:
    """
    Validation accuracy and training time for every C of ``grid``, on a
    seeded hold-out of ``fraction`` of the rows.
    """
    train, validation = random_split(dataset, fraction, solver_config.seed)
    kernel = kernel_config.resolve(train, seed=solver_config.seed)
    records = []
    for solver in solvers:
        if solver == 'bc' and not kernel.normalized:
            logger.warning(f"skipping bc in the C sweep: {kernel.kind} is not a normalized kernel")
            continue
        for C in grid:
            model, stats = train_ovo(train, kernel, C, solver, solver_config, workers)
            records.append({
                'C': C,
                'solver': solver,
                'validation_accuracy': accuracy(model, validation),
                'time_s': sum(s.wall_time_seconds for s in stats),
            })
            logger.info(f"C={C:g} {solver}: {records[-1]['validation_accuracy']:.2f}%")
    return pd.DataFrame(records, columns=['C', 'solver', 'validation_accuracy', 'time_s'])


def best_c(sweep: pd.DataFrame, solver: str) -> float:
    """Highest validation accuracy for ``solver``; ties go to the smallest C"""
    rows = sweep[sweep['solver'] == solver]
    if rows.empty:
        raise UsageError(f"no sweep results for solver '{solver}'")
    top = rows['validation_accuracy'].max()
    return float(rows.loc[rows['validation_accuracy'] == top, 'C'].min())
