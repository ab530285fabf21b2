"""Cycle-level execution of a stream schedule.

Each pass latches one filter column into the PE columns and streams the
matching feature columns through them. Every (feature column, set) stream
keeps a sliding window of its last k delivered samples; once the window is
full, the PE column emits one partial sum, which is added into the output
grid. A pass costs one cycle per two injected samples plus a k-cycle drain.

Two executors share these semantics: ``simulate_pass`` steps the PE state
one cycle at a time (slow, used for cross-checking), and ``run_pass``
evaluates the same event stream with numpy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .convcore import FeatureMap, FilterSet, conv_layer
from .errors import (EngineInvariantError, InvalidArgumentError, InvalidShapeError,
                     UnsupportedKernelError, UnsupportedStrideError)
from .mapping import (DEFAULT_COLUMN_HEIGHT, NUM_BUSES, PassEvents, StreamSchedule,
                      build_schedule, classify_kernel, padded_event_count)


@dataclass(frozen=True)
class EngineConfig:
    H: int = DEFAULT_COLUMN_HEIGHT  # PEs per physical column
    W: int = 8  # physical columns; does not affect cycle counts
    buses: int = NUM_BUSES

    def __post_init__(self):
        if self.buses != NUM_BUSES:
            raise InvalidArgumentError(f"the engine has exactly {NUM_BUSES} buses")
        if self.H < 1 or self.W < 1:
            raise InvalidArgumentError("array dimensions must be positive")

    def drain_cycles(self, k: int) -> int:
        return k

    def check_kernel(self, k: int) -> None:
        classify_kernel(k)
        if self.H < k:
            raise UnsupportedKernelError(f"kernel {k} taller than PE column height {self.H}")


def preload_filter_column(kernel, p: int) -> np.ndarray:
    """Column ``p`` of a k x k filter, as a read-only int64 vector."""
    w = np.asarray(kernel)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidShapeError(f"filter must be square 2-D, got {w.shape}")
    k = w.shape[0]
    if not 0 <= p < k:
        raise InvalidArgumentError(f"filter column {p} out of range [0, {k})")
    col = w[:, p].astype(np.int64)
    col.flags.writeable = False
    return col


@dataclass
class PassState:
    """PE-column state for one pass of the stepwise executor."""

    p: int
    column: tuple[int, ...]
    windows: dict = field(default_factory=dict)
    emitted: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.column)

    def deliver(self, col: int, set_index: int, global_row: int, value: int):
        win = self.windows.get((col, set_index))
        if win is None:
            win = self.windows[(col, set_index)] = deque(maxlen=self.k)
        win.append(value)
        if len(win) < self.k:
            return None
        partial = sum(a * b for a, b in zip(win, self.column))
        out = (col, global_row - self.k + 1, partial)
        self.emitted.append(out)
        return out


def _accumulate(acc, counts, rows, cols, values):
    m_rows, m_cols = acc.shape
    if (rows.size and (rows.min() < 0 or rows.max() >= m_rows
                       or cols.min() < 0 or cols.max() >= m_cols)):
        raise EngineInvariantError("partial sum falls outside the output grid")
    np.add.at(acc, (rows, cols), values)
    if counts is not None:
        np.add.at(counts, (rows, cols), 1)


def simulate_pass(schedule: StreamSchedule, p: int, fmap, column, acc: np.ndarray,
                  counts: np.ndarray | None = None) -> int:
    """Step one pass cycle by cycle; returns the pass's cycle count."""
    x = fmap.data if isinstance(fmap, FeatureMap) else np.asarray(fmap)
    state = PassState(p=p, column=tuple(int(v) for v in column))
    events = list(schedule.events(p))
    cycles = 0
    i = 0
    while i < len(events):
        # all events sharing this cycle, one per bus at most
        this_cycle = events[i].cycle
        rows, cols, vals = [], [], []
        while i < len(events) and events[i].cycle == this_cycle:
            ev = events[i]
            out = state.deliver(ev.col, ev.set_index, ev.global_row,
                                int(x[ev.global_row, ev.col]))
            if out is not None:
                rows.append(out[1])
                cols.append(out[0] - p)
                vals.append(out[2])
            i += 1
        if rows:
            _accumulate(acc, counts, np.array(rows), np.array(cols),
                        np.array(vals, dtype=np.int64))
        cycles = this_cycle + 1
    return cycles + len(state.column)


def run_pass(schedule: StreamSchedule, p: int, fmap, column, acc: np.ndarray,
             counts: np.ndarray | None = None, events: PassEvents | None = None) -> int:
    """Execute one pass over the whole event stream at once; returns its cycle count."""
    x = fmap.data if isinstance(fmap, FeatureMap) else np.asarray(fmap)
    col_w = np.asarray(column, dtype=np.int64)
    k = schedule.k
    if col_w.shape != (k,):
        raise InvalidShapeError(f"latched column must have {k} weights")
    ev = events if events is not None else schedule.pass_events(p)
    if len(ev) < k:
        raise EngineInvariantError("pass shorter than one window")

    delivered = x[ev.global_row, ev.col].astype(np.int64)
    fire = np.flatnonzero(ev.row_in_set >= k - 1)
    first = fire - (k - 1)
    if not (np.array_equal(ev.col[first], ev.col[fire])
            and np.array_equal(ev.set_index[first], ev.set_index[fire])
            and np.array_equal(ev.global_row[first], ev.global_row[fire] - (k - 1))):
        raise EngineInvariantError("window spans more than one column-set stream")

    partials = sliding_window_view(delivered, k)[first] @ col_w
    _accumulate(acc, counts, ev.global_row[fire] - (k - 1), ev.col[fire] - p, partials)
    return ev.injection_cycles + k


@dataclass
class EngineReport:
    outputs: np.ndarray  # (F, m, m) int64
    total_cycles: int
    per_pass_cycles: list[int]
    streamed_elements: int
    padded_elements: int
    contributions: np.ndarray  # partial-sum additions per output element
    bias_adds: np.ndarray


def _check_inputs(inputs, filters: FilterSet, cfg: EngineConfig, stride: int):
    if stride != 1:
        raise UnsupportedStrideError(f"unsupported stride {stride}: the engine streams stride 1 only")
    cfg.check_kernel(filters.k)
    maps = [x if isinstance(x, FeatureMap) else FeatureMap(np.asarray(x)) for x in inputs]
    if len(maps) != filters.in_channels:
        raise InvalidShapeError(
            f"got {len(maps)} input channels, filters expect {filters.in_channels}")
    if len({mp.n for mp in maps}) != 1:
        raise InvalidShapeError("all input channels must share one shape")
    if maps[0].n < filters.k:
        raise InvalidShapeError(f"input {maps[0].n} smaller than kernel {filters.k}")
    return maps


def run_conv(inputs, filters: FilterSet, cfg: EngineConfig | None = None, stride: int = 1,
             stepwise: bool = False) -> EngineReport:
    """Run a full convolution layer through the engine.

    Passes run filter column by filter column; within one latched column
    every (filter, channel) pair streams its feature map once. Bias is
    added when the accumulators are read out.
    """
    cfg = cfg or EngineConfig()
    maps = _check_inputs(inputs, filters, cfg, stride)
    n, k = maps[0].n, filters.k
    F = filters.out_filters
    schedule = build_schedule(n, k)
    m = schedule.m

    acc = np.zeros((F, m, m), dtype=np.int64)
    counts = np.zeros((F, m, m), dtype=np.int64)
    per_pass = []
    streamed = padded = 0
    for p in range(k):
        ev = schedule.pass_events(p)
        pad = padded_event_count(schedule, p)
        if pad:
            raise EngineInvariantError(f"{pad} padded elements scheduled in pass {p}")
        for f in range(F):
            for c, fmap in enumerate(maps):
                column = preload_filter_column(filters.weights[f, c], p)
                if stepwise:
                    cyc = simulate_pass(schedule, p, fmap, column, acc[f], counts[f])
                else:
                    cyc = run_pass(schedule, p, fmap, column, acc[f], counts[f], events=ev)
                per_pass.append(cyc)
                streamed += len(ev)
                padded += pad

    bias_adds = np.zeros_like(counts)
    for f in range(F):
        acc[f] += np.int64(filters.bias[f])
        bias_adds[f] += 1
    return EngineReport(outputs=acc, total_cycles=sum(per_pass), per_pass_cycles=per_pass,
                        streamed_elements=streamed, padded_elements=padded,
                        contributions=counts, bias_adds=bias_adds)


@dataclass
class VerificationReport:
    equal: bool
    max_abs_diff: int
    engine: EngineReport
    oracle: np.ndarray


def verify_against_oracle(inputs, filters: FilterSet, cfg: EngineConfig | None = None,
                          stride: int = 1) -> VerificationReport:
    report = run_conv(inputs, filters, cfg, stride)
    expected = conv_layer(inputs, filters, stride)
    same_shape = expected.shape == report.outputs.shape
    diff = int(np.abs(report.outputs - expected).max()) if same_shape else -1
    return VerificationReport(equal=same_shape and diff == 0, max_abs_diff=diff,
                              engine=report, oracle=expected)
