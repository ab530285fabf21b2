import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from colstream.errors import InvalidShapeError, UnsupportedKernelError
from colstream.mapping import (LARGE, SMALL, Event, build_schedule, classify_kernel,
                               decompose_column, padded_event_count, spare_pe_report,
                               write_jsonl)

ALL_NK = [(n, k) for k in range(3, 12) for n in range(k, 65)]


def naive_events(n, k, p):
    """Nested-loop enumeration: columns, then sets, then rows; two per cycle."""
    L = 21 if k <= 5 else 15
    step = L - k + 1
    starts = list(range(0, n - k + 1, step))
    out = []
    for x in range(p, p + n - k + 1):
        for si, start in enumerate(starts):
            length = min(L, n - start)
            for r in range(length):
                seq = len(out)
                out.append(Event(p, seq, seq // 2, seq % 2, x, si, r, start + r))
    return out


@pytest.mark.parametrize("k,tag,L", [(4, SMALL, 21), (7, LARGE, 15), (3, SMALL, 21),
                                      (5, SMALL, 21), (6, LARGE, 15), (11, LARGE, 15)])
def test_classify_kernel(k, tag, L):
    kc = classify_kernel(k)
    assert (kc.class_tag, kc.set_len) == (tag, L)
    assert kc.set_len > k


@pytest.mark.parametrize("k", [2, 12, 0, -1])
def test_classify_rejects(k):
    with pytest.raises(UnsupportedKernelError):
        classify_kernel(k)


def test_decompose_227_4():
    plan = decompose_column(227, 4)
    assert (plan.set_len, plan.step, plan.set_count) == (21, 18, 13)
    assert plan.sets[:12] == tuple((18 * i, 21) for i in range(12))
    assert plan.sets[12] == (216, 11)
    assert plan.streamed_elements == 263


def test_decompose_single_sets():
    assert decompose_column(15, 7).sets == ((0, 15),)
    assert decompose_column(15, 7).streamed_elements == 15
    assert decompose_column(21, 3).sets == ((0, 21),)
    assert decompose_column(21, 3).streamed_elements == 21


def test_decompose_errors():
    with pytest.raises(InvalidShapeError):
        decompose_column(4, 5)
    with pytest.raises(UnsupportedKernelError):
        decompose_column(20, 2)


@pytest.mark.parametrize("n,k", ALL_NK)
def test_plan_invariants(n, k):
    plan = decompose_column(n, k)
    S = plan.set_count
    assert S == math.ceil((n - k + 1) / (plan.set_len - k + 1))
    for i, (start, length) in enumerate(plan.sets):
        assert start == i * plan.step
        assert length == (plan.set_len if i < S - 1 else n - (S - 1) * plan.step)
        assert k <= length <= plan.set_len
    for (s0, l0), (s1, _) in zip(plan.sets, plan.sets[1:]):
        assert s0 + l0 - s1 == k - 1
    assert plan.streamed_elements == n + (S - 1) * (k - 1)
    # every output row produced exactly once
    assert sorted(plan.window_starts()) == list(range(n - k + 1))
    assert len(set(plan.window_starts())) == n - k + 1


def test_schedule_4_3():
    sch = build_schedule(4, 3)
    ev = list(sch.events(0))
    assert len(ev) == 8
    assert ev[0] == Event(0, 0, 0, 0, 0, 0, 0, 0)
    assert max(e.cycle for e in ev) == 3
    assert {e.col for e in ev} == {0, 1}
    assert {e.col for e in sch.events(2)} == {2, 3}
    assert ev == naive_events(4, 3, 0)


def test_schedule_227_7_count():
    sch = build_schedule(227, 7)
    assert sch.events_per_pass == 221 * 371 == 81_991
    assert len(sch.pass_events(0)) == 81_991


def test_pass_out_of_range():
    with pytest.raises(InvalidShapeError):
        build_schedule(10, 3).pass_events(3)


@pytest.mark.parametrize("n,k", [(k, k) for k in range(3, 12)] +
                         [(16, 3), (22, 4), (40, 5), (31, 6), (64, 7), (50, 9), (64, 11)])
def test_schedule_matches_naive_enumeration(n, k):
    sch = build_schedule(n, k)
    for p in range(k):
        assert list(sch.events(p)) == naive_events(n, k, p)


@pytest.mark.parametrize("n,k", ALL_NK[::7])
def test_schedule_invariants(n, k):
    sch = build_schedule(n, k)
    S = sch.plan.set_count
    for p in range(k):
        ev = sch.pass_events(p)
        assert len(ev) == (n - k + 1) * (n + (S - 1) * (k - 1))
        assert padded_event_count(sch, p) == 0
        assert ev.global_row.min() >= 0 and ev.global_row.max() < n
        assert ev.col.min() == p and ev.col.max() == p + n - k
        per_cycle = np.bincount(ev.cycle)
        assert per_cycle.max() <= 2
        # no idle bus slot before the last injection cycle
        assert (per_cycle[:-1] == 2).all()
        assert ev.injection_cycles == math.ceil(len(ev) / 2)
        key = ev.col * 1000 + ev.set_index
        same = key[1:] == key[:-1]
        assert (ev.row_in_set[1:][same] == ev.row_in_set[:-1][same] + 1).all()


def test_jsonl_round_trip():
    sch = build_schedule(12, 5)
    buf = io.StringIO()
    count = write_jsonl(sch.events(1), buf)
    lines = buf.getvalue().splitlines()
    assert count == len(lines) == sch.events_per_pass
    assert [Event.from_json(line) for line in lines] == list(sch.events(1))
    assert lines[0].startswith('{"pass":1,"seq":0,"cycle":0,"bus":0,"col":1,"set":0,')


@pytest.mark.parametrize("H,k,logical,spare", [(11, 4, 2, 3), (11, 11, 1, 0), (11, 7, 1, 4)])
def test_spare_report(H, k, logical, spare):
    r = spare_pe_report(H, k)
    assert (r.logical_cols_per_physical, r.spare_pes_per_physical_col) == (logical, spare)
    assert r.utilization == pytest.approx(k * logical / H)


def test_spare_utilization_example():
    assert spare_pe_report(11, 4).utilization == 8 / 11


def test_spare_rejects_tall_kernel():
    with pytest.raises(UnsupportedKernelError):
        spare_pe_report(5, 7)


@given(st.integers(1, 64), st.integers(1, 64))
def test_spare_invariants(H, k):
    if H < k:
        return
    r = spare_pe_report(H, k)
    assert 0 <= r.spare_pes_per_physical_col < k
    assert 0 < r.utilization <= 1
    assert r.logical_cols_per_physical * k + r.spare_pes_per_physical_col == H


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 11).flatmap(lambda k: st.tuples(st.integers(k, 120), st.just(k))))
def test_window_partition_property(nk):
    n, k = nk
    starts = decompose_column(n, k).window_starts()
    assert sorted(starts) == list(range(n - k + 1))
