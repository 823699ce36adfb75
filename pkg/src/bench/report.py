"""
Benchmark result tables: one row per (dataset, solver), written as CSV
and as a Markdown summary.
"""

from dataclasses import dataclass, asdict
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from src.utils.errors import DataError
from src.utils.file_operations import write_text
from src.utils.logger import get_logger

logger = get_logger(__name__)

REPORT_COLUMNS = ['dataset', 'solver', 'accuracy', 'time_s', 'speedup', 'coreset', 'iters']
BASELINE = 'bc'


@dataclass
class BenchRow:
    dataset: str
    solver: str
    accuracy: float
    time_s: float
    coreset: int
    iters: int
    converged: bool = True
    speedup: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 100.0:
            raise DataError(f"accuracy {self.accuracy} outside [0, 100]")


class BenchReport:
    """
    Collected rows. Speedups are t_bc / t_solver within a dataset and stay
    blank when that dataset has no core vector row.
    """

    def __init__(self, rows: Optional[List[BenchRow]] = None):
        self.rows: List[BenchRow] = list(rows or [])

    def add(self, row: BenchRow):
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def compute_speedups(self):
        baseline = {row.dataset: row.time_s for row in self.rows if row.solver == BASELINE}
        for row in self.rows:
            reference = baseline.get(row.dataset)
            if reference is None:
                row.speedup = None
            elif row.solver == BASELINE:
                row.speedup = 1.0
            else:
                row.speedup = reference / row.time_s if row.time_s > 0 else None

    def to_frame(self) -> pd.DataFrame:
        self.compute_speedups()
        frame = pd.DataFrame([asdict(row) for row in self.rows], columns=REPORT_COLUMNS + ['converged'])
        return frame[REPORT_COLUMNS]

    def write_csv(self, path: Union[str, Path]) -> Path:
        text = self.to_frame().to_csv(index=False, na_rep='', float_format='%.6g')
        return write_text(path, text)

    def to_markdown(self) -> str:
        self.compute_speedups()
        lines = [
            "# Benchmark Summary",
            "",
            "| dataset | solver | accuracy (%) | time (s) | speedup | coreset | iterations |",
            "|---|---|---|---|---|---|---|",
        ]
        for row in self.rows:
            speedup = '' if row.speedup is None else f"{row.speedup:.2f}"
            flag = '' if row.converged else ' (not converged)'
            lines.append(
                f"| {row.dataset} | {row.solver}{flag} | {row.accuracy:.2f} | {row.time_s:.3f} "
                f"| {speedup} | {row.coreset} | {row.iters} |"
            )
        if not self.rows:
            lines.append("| *None* | | | | | | |")
        lines += ["", "---", f"*Generated at {datetime.now().isoformat(timespec='seconds')}*", ""]
        return '\n'.join(lines)

    def write_summary(self, path: Union[str, Path]) -> Path:
        return write_text(path, self.to_markdown())


def read_report(path: Union[str, Path]) -> pd.DataFrame:
    """Load a report CSV, checking its header"""
    frame = pd.read_csv(path)
    if list(frame.columns) != REPORT_COLUMNS:
        raise DataError(f"{path}: unexpected report columns {list(frame.columns)}")
    return frame
