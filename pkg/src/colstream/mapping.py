"""Column-set decomposition and the two-bus injection schedule.

A feature column of height ``n`` is cut into column sets of ``L`` samples
(21 for 3 <= k <= 5, 15 for 6 <= k <= 11). Consecutive sets share
``k - 1`` rows so every length-k window lies inside exactly one set. For
filter column ``p`` the engine streams feature columns ``p .. p + m - 1``;
each column's sets go out in order, two samples per cycle (bus 0 first,
then bus 1), with no idle slots between sets or columns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import InvalidShapeError, UnsupportedKernelError

K_MIN, K_MAX = 3, 11
SMALL, LARGE = "SMALL", "LARGE"
SET_LEN = {SMALL: 21, LARGE: 15}
DEFAULT_COLUMN_HEIGHT = 11
NUM_BUSES = 2

EVENT_FIELDS = ("pass", "seq", "cycle", "bus", "col", "set", "row_in_set", "global_row")


@dataclass(frozen=True)
class KernelClass:
    class_tag: str
    set_len: int


def classify_kernel(k: int) -> KernelClass:
    if 3 <= k <= 5:
        return KernelClass(SMALL, SET_LEN[SMALL])
    if 6 <= k <= 11:
        return KernelClass(LARGE, SET_LEN[LARGE])
    raise UnsupportedKernelError(f"unsupported kernel size {k}: expected {K_MIN}..{K_MAX}")


@dataclass(frozen=True)
class ColumnSetPlan:
    n: int
    k: int
    set_len: int
    step: int
    set_count: int
    sets: tuple[tuple[int, int], ...]  # (start_row, length)

    @property
    def streamed_elements(self) -> int:
        """Samples injected per feature column, overlap rows counted twice."""
        return sum(length for _, length in self.sets)

    def window_starts(self) -> list[int]:
        """Global start rows of every length-k window, in streaming order."""
        return [start + w for start, length in self.sets for w in range(length - self.k + 1)]


def decompose_column(n: int, k: int) -> ColumnSetPlan:
    kc = classify_kernel(k)
    if n < k:
        raise InvalidShapeError(f"column height {n} smaller than kernel {k}")
    L = kc.set_len
    step = L - k + 1
    m = n - k + 1
    S = -(-m // step)
    sets = tuple((i * step, min(L, n - i * step)) for i in range(S))
    return ColumnSetPlan(n=n, k=k, set_len=L, step=step, set_count=S, sets=sets)


class Event(NamedTuple):
    pass_index: int
    seq: int
    cycle: int
    bus: int
    col: int
    set_index: int
    row_in_set: int
    global_row: int

    def to_json(self) -> str:
        return json.dumps(dict(zip(EVENT_FIELDS, self)), separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "Event":
        d = json.loads(line)
        return cls(*(int(d[f]) for f in EVENT_FIELDS))


@dataclass(frozen=True)
class PassEvents:
    """Column-oriented view of one pass of a schedule (all int64 arrays)."""

    pass_index: int
    seq: np.ndarray
    cycle: np.ndarray
    bus: np.ndarray
    col: np.ndarray
    set_index: np.ndarray
    row_in_set: np.ndarray
    global_row: np.ndarray

    def __len__(self) -> int:
        return len(self.seq)

    @property
    def injection_cycles(self) -> int:
        return int(self.cycle[-1]) + 1 if len(self) else 0

    def __iter__(self) -> Iterator[Event]:
        cols = (self.seq, self.cycle, self.bus, self.col,
                self.set_index, self.row_in_set, self.global_row)
        for row in zip(*(c.tolist() for c in cols)):
            yield Event(self.pass_index, *row)


@dataclass(frozen=True)
class StreamSchedule:
    n: int
    k: int
    plan: ColumnSetPlan

    @property
    def m(self) -> int:
        return self.n - self.k + 1

    @property
    def num_passes(self) -> int:
        return self.k

    @property
    def events_per_pass(self) -> int:
        return self.m * self.plan.streamed_elements

    @property
    def passes(self) -> list[PassEvents]:
        return [self.pass_events(p) for p in range(self.k)]

    def _column_template(self):
        set_idx, row_in, grow = [], [], []
        for i, (start, length) in enumerate(self.plan.sets):
            set_idx.extend([i] * length)
            row_in.extend(range(length))
            grow.extend(range(start, start + length))
        return (np.array(set_idx, dtype=np.int64), np.array(row_in, dtype=np.int64),
                np.array(grow, dtype=np.int64))

    def pass_events(self, p: int) -> PassEvents:
        if not 0 <= p < self.k:
            raise InvalidShapeError(f"pass {p} out of range [0, {self.k})")
        set_idx, row_in, grow = self._column_template()
        per_col = len(grow)
        seq = np.arange(self.m * per_col, dtype=np.int64)
        return PassEvents(
            pass_index=p,
            seq=seq,
            cycle=seq // NUM_BUSES,
            bus=seq % NUM_BUSES,
            col=p + np.repeat(np.arange(self.m, dtype=np.int64), per_col),
            set_index=np.tile(set_idx, self.m),
            row_in_set=np.tile(row_in, self.m),
            global_row=np.tile(grow, self.m),
        )

    def events(self, p: int) -> Iterator[Event]:
        return iter(self.pass_events(p))


def build_schedule(n: int, k: int) -> StreamSchedule:
    return StreamSchedule(n=n, k=k, plan=decompose_column(n, k))


def padded_event_count(schedule: StreamSchedule, p: int) -> int:
    """Events in pass ``p`` that point outside the real n x n input."""
    ev = schedule.pass_events(p)
    n = schedule.n
    bad = (ev.global_row < 0) | (ev.global_row >= n) | (ev.col < 0) | (ev.col >= n)
    return int(bad.sum())


def write_jsonl(events, fh) -> int:
    count = 0
    for ev in events:
        fh.write(ev.to_json())
        fh.write("\n")
        count += 1
    return count


@dataclass(frozen=True)
class SpareReport:
    k: int
    physical_col_height: int
    logical_cols_per_physical: int
    spare_pes_per_physical_col: int
    utilization: float


def spare_pe_report(H: int, k: int) -> SpareReport:
    """How many k-high logical columns fit in one H-high physical column."""
    if k < 1 or H < k:
        raise UnsupportedKernelError(f"kernel {k} does not fit a {H}-PE column")
    logical = H // k
    return SpareReport(k=k, physical_col_height=H, logical_cols_per_physical=logical,
                       spare_pes_per_physical_col=H % k, utilization=k * logical / H)
