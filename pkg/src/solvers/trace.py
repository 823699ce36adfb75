"""
Per-iteration convergence trace, optionally streamed to a CSV file.
"""

import csv
from pathlib import Path
from typing import List, NamedTuple, Optional, Union

from src.utils.file_operations import ensure_directory

TRACE_COLUMNS = ('iteration', 'step', 'delta_plus', 'delta_minus', 'r2', 'coreset')


class TraceRecord(NamedTuple):
    iteration: int
    step: str
    delta_plus: float
    delta_minus: float
    r2: float
    coreset: int


class TraceWriter:
    """
    Collects TraceRecords in memory and, when ``path`` is given, writes
    them as CSV rows with the header of TRACE_COLUMNS.

    Step names are 'init', 'fw', 'away', 'drop', 'bc' and 'stop'.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None, keep: bool = True):
        self.path = Path(path) if path else None
        self.keep = keep
        self.records: List[TraceRecord] = []
        self._handle = None
        self._writer = None
        if self.path is not None:
            ensure_directory(self.path.parent)
            self._handle = open(self.path, 'w', newline='')
            self._writer = csv.writer(self._handle)
            self._writer.writerow(TRACE_COLUMNS)

    def record(self, iteration: int, step: str, delta_plus: float, delta_minus: float,
               r2: float, coreset: int):
        entry = TraceRecord(iteration, step, float(delta_plus), float(delta_minus), float(r2), int(coreset))
        if self.keep:
            self.records.append(entry)
        if self._writer is not None:
            self._writer.writerow([entry.iteration, entry.step, repr(entry.delta_plus),
                                   repr(entry.delta_minus), repr(entry.r2), entry.coreset])

    def steps(self) -> List[str]:
        return [r.step for r in self.records]

    def close(self):
        if self._handle is not None:
            self._handle.close()
            self._handle = None
            self._writer = None

    def __enter__(self) -> 'TraceWriter':
        return self

    def __exit__(self, *exc):
        self.close()
