"""
Least-recently-used cache of k~ columns.

An entry belongs to one row i and holds k~(x_i, x_j) for the coreset
members j requested so far. Members are mapped to append-only slots, so
when the coreset grows only the new members are evaluated. Values are
written exactly as TildeKernel.block computes them, which makes hits
bit-identical to direct evaluation.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from src.kernels.tilde import TildeKernel
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class _Column:
    values: np.ndarray
    known: np.ndarray

    @property
    def nbytes(self) -> int:
        return self.values.nbytes + self.known.nbytes

    def grow(self, size: int):
        if size <= len(self.values):
            return
        capacity = max(size, 2 * len(self.values), 16)
        values = np.zeros(capacity)
        known = np.zeros(capacity, dtype=bool)
        values[:len(self.values)] = self.values
        known[:len(self.known)] = self.known
        self.values, self.known = values, known


class KernelCache:
    """
    Byte-budgeted LRU cache of k~ columns over the coreset.

    One cache per solver instance; not shared between threads.
    """

    def __init__(self, capacity_bytes: int):
        self.capacity_bytes = max(int(capacity_bytes), 0)
        self._store: 'OrderedDict[int, _Column]' = OrderedDict()
        self._slots: Dict[int, int] = {}
        self._last_active = (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
        self.resident_bytes = 0
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        self.kernel_evals = 0

    def __len__(self) -> int:
        return len(self._store)

    def __contains__(self, row: int) -> bool:
        return row in self._store

    def _slots_for(self, active_rows: np.ndarray) -> np.ndarray:
        last_rows, last_slots = self._last_active
        known = len(last_rows)
        if len(active_rows) >= known and np.array_equal(active_rows[:known], last_rows):
            # the coreset usually grows by appending, so only the tail is new
            start = known
        else:
            start, last_slots = 0, last_slots[:0]
        slots = np.empty(len(active_rows), dtype=np.int64)
        slots[:start] = last_slots
        for position, row in enumerate(active_rows[start:].tolist(), start):
            slot = self._slots.get(row)
            if slot is None:
                slot = len(self._slots)
                self._slots[row] = slot
            slots[position] = slot
        self._last_active = (active_rows.copy(), slots)
        return slots

    def _evict_until(self, needed: int):
        while self._store and self.resident_bytes + needed > self.capacity_bytes:
            row, column = self._store.popitem(last=False)
            self.resident_bytes -= column.nbytes
            self.evictions += 1
            logger.debug(f"Evicted column {row}, resident {self.resident_bytes}/{self.capacity_bytes} bytes")

    def _store_column(self, row: int, column: _Column):
        previous = self._store.pop(row, None)
        if previous is not None:
            self.resident_bytes -= previous.nbytes
        self._evict_until(column.nbytes)
        if self.resident_bytes + column.nbytes > self.capacity_bytes:
            return
        self._store[row] = column
        self.resident_bytes += column.nbytes

    def get_columns(self, tk: TildeKernel, rows: Sequence[int], active_rows: Sequence[int]) -> np.ndarray:
        """
        k~(x_i, x_j) for i in ``rows`` and j in ``active_rows``, shape (rows, active).

        Rows whose entry already covers every active member count as hits;
        the others evaluate only what they miss, in one batched block.
        """
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        active_rows = np.asarray(active_rows, dtype=np.int64).reshape(-1)
        out = np.empty((len(rows), len(active_rows)))
        if len(rows) == 0 or len(active_rows) == 0:
            return out

        slots = self._slots_for(active_rows)
        top_slot = int(slots.max()) + 1
        pending = []
        missing_any = np.zeros(len(active_rows), dtype=bool)
        for position, row in enumerate(rows.tolist()):
            column = self._store.get(row)
            if column is not None:
                before = column.nbytes
                column.grow(top_slot)
                self.resident_bytes += column.nbytes - before
                known = column.known[slots]
                if known.all():
                    self._store.move_to_end(row)
                    out[position] = column.values[slots]
                    self.hits += 1
                    continue
                missing_any |= ~known
            else:
                column = _Column(np.zeros(top_slot), np.zeros(top_slot, dtype=bool))
                missing_any[:] = True
            pending.append((position, row, column))
            self.misses += 1

        if not pending:
            self._evict_until(0)
            return out

        missing_cols = np.flatnonzero(missing_any)
        computed = tk.block([row for _, row, _ in pending], active_rows[missing_cols])
        self.kernel_evals += computed.size
        missing_slots = slots[missing_cols]
        for k, (position, row, column) in enumerate(pending):
            column.values[missing_slots] = computed[k]
            column.known[missing_slots] = True
            out[position] = column.values[slots]
            if self._store.get(row) is column:
                self._store.move_to_end(row)
            else:
                self._store_column(row, column)
        self._evict_until(0)
        return out

    def evaluate(self, tk: TildeKernel, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Uncached block evaluation that still counts toward kernel_evals"""
        block = tk.block(rows, cols)
        self.kernel_evals += block.size
        return block

    def get_column(self, tk: TildeKernel, i: int, active_rows: Sequence[int]) -> np.ndarray:
        """k~(x_i, x_j) for j in ``active_rows``"""
        return self.get_columns(tk, [i], active_rows)[0]

    def stats(self) -> Dict[str, int]:
        return {
            'hits': self.hits,
            'misses': self.misses,
            'evictions': self.evictions,
            'kernel_evals': self.kernel_evals,
            'resident_bytes': self.resident_bytes,
        }


def cache_get_column(
    cache: Optional[KernelCache], tk: TildeKernel, i: int, active_rows: Sequence[int]
) -> np.ndarray:
    """Cached column lookup; ``cache=None`` evaluates directly"""
    if cache is None:
        return tk.block([i], active_rows)[0]
    return cache.get_column(tk, i, active_rows)
