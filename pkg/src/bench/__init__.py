"""
Solver comparison runs and their reports.
"""

from src.bench.harness import BenchDataset, BenchRunner, BenchSuite, best_c, load_suite, sweep_c
from src.bench.report import BenchReport, BenchRow, read_report

__all__ = [
    'BenchDataset', 'BenchRunner', 'BenchSuite', 'best_c', 'load_suite', 'sweep_c',
    'BenchReport', 'BenchRow', 'read_report',
]
