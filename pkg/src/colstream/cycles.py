"""Closed-form cycle models and the engine-vs-baseline sweep.

Column-streaming engine (one input channel, one filter): k passes, each
injecting ``(n - k + 1) * streamed`` samples two per cycle, plus a k-cycle
drain per pass.

Zero-padded baseline: the k x k kernel is padded up to a multiple of 3 and
split into ``ceil(k/3)**2`` 3x3 sub-filters; each sub-filter costs one full
streaming pass over the n x n map at one sample per cycle.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields

from .errors import InvalidArgumentError
from .mapping import K_MAX, K_MIN, NUM_BUSES, classify_kernel, decompose_column

SIMILAR_BAND = 0.05
CSV_HEADER = ("k", "cycles_this", "cycles_baseline", "ratio", "classification",
              "padded_elements_baseline")


def _check(n: int, k: int) -> None:
    classify_kernel(k)
    if n < k:
        raise InvalidArgumentError(f"feature size {n} smaller than kernel {k}")


def cycles_this_work(n: int, k: int) -> int:
    _check(n, k)
    plan = decompose_column(n, k)
    events = (n - k + 1) * plan.streamed_elements
    return k * (-(-events // NUM_BUSES) + k)


def _subfilters_per_side(k: int) -> int:
    return -(-k // 3)


def cycles_baseline(n: int, k: int) -> int:
    _check(n, k)
    return _subfilters_per_side(k) ** 2 * n * n


def padded_elements_baseline(n: int, k: int) -> int:
    """Zero weight positions applied across all outputs by the padded baseline."""
    _check(n, k)
    padded_k = 3 * _subfilters_per_side(k)
    return (padded_k ** 2 - k ** 2) * (n - k + 1) ** 2


def classify_ratio(ratio: float, band: float = SIMILAR_BAND) -> str:
    if abs(ratio - 1.0) <= band:
        return "similar"
    return "fewer" if ratio < 1.0 else "more"


@dataclass(frozen=True)
class ComparisonRow:
    k: int
    cycles_this: int
    cycles_baseline: int
    ratio: float
    classification: str
    padded_elements_baseline: int

    def to_dict(self) -> dict:
        return asdict(self)


def compare_row(n: int, k: int) -> ComparisonRow:
    this, base = cycles_this_work(n, k), cycles_baseline(n, k)
    ratio = this / base
    return ComparisonRow(k=k, cycles_this=this, cycles_baseline=base, ratio=ratio,
                         classification=classify_ratio(ratio),
                         padded_elements_baseline=padded_elements_baseline(n, k))


def compare_sweep(n: int = 227, k_range: tuple[int, int] = (K_MIN, K_MAX)) -> list[ComparisonRow]:
    k_min, k_max = k_range
    if k_min > k_max or k_min < K_MIN or k_max > K_MAX:
        raise InvalidArgumentError(
            f"kernel range [{k_min}, {k_max}] must be non-empty and within [{K_MIN}, {K_MAX}]")
    if n < k_max:
        raise InvalidArgumentError(f"feature size {n} smaller than kernel {k_max}")
    return [compare_row(n, k) for k in range(k_min, k_max + 1)]


def rows_to_csv(rows: list[ComparisonRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        # repr keeps the float exact across a round trip
        w.writerow([r.k, r.cycles_this, r.cycles_baseline, repr(r.ratio),
                    r.classification, r.padded_elements_baseline])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ComparisonRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise InvalidArgumentError(f"unexpected comparison CSV header {reader.fieldnames}")
    types = {f.name: f.type for f in fields(ComparisonRow)}
    conv = {"int": int, "float": float, "str": str}
    return [ComparisonRow(**{key: conv[types[key]](val) for key, val in rec.items()})
            for rec in reader]


def rows_to_jsonl(rows: list[ComparisonRow]) -> str:
    return "".join(json.dumps(r.to_dict(), separators=(",", ":")) + "\n" for r in rows)


def rows_to_svg(rows: list[ComparisonRow], n: int, width: int = 480, height: int = 300) -> str:
    """Two-series line chart of required cycles vs kernel size."""
    pad = 40
    ks = [r.k for r in rows]
    top = max(max(r.cycles_this, r.cycles_baseline) for r in rows)
    span_k = max(ks[-1] - ks[0], 1)

    def pt(k, v):
        x = pad + (k - ks[0]) * (width - 2 * pad) / span_k
        y = height - pad - v * (height - 2 * pad) / top
        return f"{x:.1f},{y:.1f}"

    this_line = " ".join(pt(r.k, r.cycles_this) for r in rows)
    base_line = " ".join(pt(r.k, r.cycles_baseline) for r in rows)
    ticks = "".join(
        f'<text x="{pt(k, 0).split(",")[0]}" y="{height - pad + 15}" font-size="10" '
        f'text-anchor="middle">{k}</text>' for k in ks)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<text x="{width // 2}" y="16" font-size="12" text-anchor="middle">'
        f'Required cycles for a {n}x{n} feature map</text>\n'
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<polyline fill="none" stroke="steelblue" points="{base_line}"/>\n'
        f'<polyline fill="none" stroke="darkorange" points="{this_line}"/>\n'
        f'{ticks}\n'
        f'<text x="{width - pad}" y="{pad}" font-size="10" fill="steelblue" text-anchor="end">baseline</text>\n'
        f'<text x="{width - pad}" y="{pad + 12}" font-size="10" fill="darkorange" text-anchor="end">column streaming</text>\n'
        '</svg>\n'
    )
