"""Command-line front end.

    colstream sim --n 227 --k 4 --seed 1
    colstream compare --n 227 --out fig12.csv --svg fig12.svg
    colstream eval --normalize-to 152
    colstream schedule --n 4 --k 3 --pass 0
    colstream spares --k 4

Exit codes: 0 success, 2 invalid arguments or unsupported configuration,
3 engine/oracle mismatch.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import cycles, priorart
from .engine import EngineConfig, verify_against_oracle
from .errors import ColstreamError
from .mapping import (DEFAULT_COLUMN_HEIGHT, EVENT_FIELDS, K_MAX, K_MIN, build_schedule,
                      spare_pe_report)
from .rng import random_layer

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 2, 3


@dataclass
class RunSpec:
    command: str
    n: int = 227
    k: int = 3
    stride: int = 1
    channels: int = 1
    filters: int = 1
    seed: int = 0
    kmin: int = K_MIN
    kmax: int = K_MAX
    pass_index: int = 0
    format: str = "csv"
    out: str | None = None
    svg: str | None = None
    normalize_to: float | None = None
    dataset: str | None = None
    height: int = DEFAULT_COLUMN_HEIGHT
    k_given: bool = False


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_sim(spec: RunSpec) -> int:
    if spec.channels < 1 or spec.filters < 1:
        raise UsageError("channels and filters must be >= 1")
    inputs, filters = random_layer(spec.seed, spec.n, spec.k, spec.channels, spec.filters)
    res = verify_against_oracle(inputs, filters, EngineConfig(), stride=spec.stride)
    rep = res.engine
    verified = "true" if res.equal else "false"
    print(f"cycles={rep.total_cycles} verified={verified}")
    if spec.out:
        summary = {
            "n": spec.n, "k": spec.k, "channels": spec.channels, "filters": spec.filters,
            "seed": spec.seed, "cycles": rep.total_cycles, "passes": len(rep.per_pass_cycles),
            "streamed_elements": rep.streamed_elements,
            "padded_elements": rep.padded_elements, "verified": res.equal,
            "max_abs_diff": res.max_abs_diff,
        }
        with _sink(spec.out) as fh:
            fh.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK if res.equal else EXIT_MISMATCH


def cmd_compare(spec: RunSpec) -> int:
    rows = cycles.compare_sweep(spec.n, (spec.kmin, spec.kmax))
    text = cycles.rows_to_csv(rows) if spec.format == "csv" else cycles.rows_to_jsonl(rows)
    with _sink(spec.out) as fh:
        fh.write(text)
    # keep stdout parseable when the table itself goes there
    verdict_fh = sys.stdout if spec.out else sys.stderr
    for r in rows:
        print(f"k={r.k}: {r.classification} (this={r.cycles_this} baseline={r.cycles_baseline} "
              f"ratio={r.ratio:.4f})", file=verdict_fh)
    if spec.svg:
        with open(spec.svg, "w") as fh:
            fh.write(cycles.rows_to_svg(rows, spec.n))
    return EXIT_OK


EVAL_HEADER = ("name", "computed_e", "paper_e", "delta")
NORM_HEADER = ("norm_compute_gops", "norm_power_w", "norm_area_mm2")


def cmd_eval(spec: RunSpec) -> int:
    if spec.dataset:
        try:
            with open(spec.dataset) as fh:
                records = priorart.records_from_csv(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read dataset {spec.dataset}: {exc}") from exc
    else:
        records = priorart.builtin_dataset()
    rows = priorart.validate_dataset(records)
    normed = priorart.normalize(records, spec.normalize_to) if spec.normalize_to else None
    order = sorted(range(len(rows)), key=lambda i: -rows[i].computed_e)

    table = []
    for i in order:
        r = rows[i]
        rec = {"name": r.name, "computed_e": round(r.computed_e, 6),
               "paper_e": "" if r.paper_e is None else r.paper_e,
               "delta": "" if r.relative_delta is None else round(r.relative_delta, 6)}
        if normed:
            nr = normed[i]
            rec.update(norm_compute_gops=nr.compute_gops, norm_power_w=round(nr.power_w, 9),
                       norm_area_mm2=round(nr.area_mm2, 9))
        table.append(rec)

    with _sink(spec.out) as fh:
        if spec.format == "jsonl":
            for rec in table:
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        else:
            header = EVAL_HEADER + (NORM_HEADER if normed else ())
            w = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
            w.writeheader()
            w.writerows(table)
    return EXIT_OK


def cmd_schedule(spec: RunSpec) -> int:
    schedule = build_schedule(spec.n, spec.k)
    if not 0 <= spec.pass_index < spec.k:
        raise UsageError(f"pass {spec.pass_index} out of range [0, {spec.k})")
    ev = schedule.pass_events(spec.pass_index)
    with _sink(spec.out) as fh:
        if spec.format == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(EVENT_FIELDS)
            w.writerows(ev)
        else:
            # one json.dumps per event is slow for 100k+ events; the layout is fixed
            buf = io.StringIO()
            for e in ev:
                buf.write('{"pass":%d,"seq":%d,"cycle":%d,"bus":%d,"col":%d,"set":%d,'
                          '"row_in_set":%d,"global_row":%d}\n' % tuple(e))
            fh.write(buf.getvalue())
    return EXIT_OK


def cmd_spares(spec: RunSpec) -> int:
    ks = [spec.k] if spec.k_given else list(range(K_MIN, K_MAX + 1))
    with _sink(spec.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "physical_col_height", "logical_cols_per_physical",
                    "spare_pes_per_physical_col", "utilization"])
        for k in ks:
            r = spare_pe_report(spec.height, k)
            w.writerow([r.k, r.physical_col_height, r.logical_cols_per_physical,
                        r.spare_pes_per_physical_col, f"{r.utilization:.6f}"])
    return EXIT_OK


COMMANDS = {"sim": cmd_sim, "compare": cmd_compare, "eval": cmd_eval,
            "schedule": cmd_schedule, "spares": cmd_spares}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colstream", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, k_default=None, fmt="csv"):
        p.add_argument("--n", type=int, default=227, help="input feature size (n x n)")
        p.add_argument("--k", type=int, default=k_default, help="kernel size")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "jsonl"), default=fmt)

    p = sub.add_parser("sim", help="run the engine on seeded random data and verify it")
    common(p, k_default=3)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--channels", type=int, default=1)
    p.add_argument("--filters", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("compare", help="cycle comparison sweep against the padded baseline")
    common(p)
    p.add_argument("--kmin", type=int, default=K_MIN)
    p.add_argument("--kmax", type=int, default=K_MAX)
    p.add_argument("--svg", help="also write a line chart to this path")

    p = sub.add_parser("eval", help="evaluation values of prior-art accelerators")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--normalize-to", dest="normalize_to", type=float)
    p.add_argument("--dataset", help="CSV of accelerator records instead of the builtin table")

    p = sub.add_parser("schedule", help="dump one pass of the injection schedule")
    common(p, k_default=3, fmt="jsonl")
    p.add_argument("--pass", dest="pass_index", type=int, default=0)

    p = sub.add_parser("spares", help="spare-PE utilization per kernel size")
    common(p)
    p.add_argument("--height", type=int, default=DEFAULT_COLUMN_HEIGHT,
                   help="physical PE column height")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    given = {f: getattr(args, f) for f in RunSpec.__dataclass_fields__
             if getattr(args, f, None) is not None}
    spec = RunSpec(**given, k_given=getattr(args, "k", None) is not None)
    try:
        return COMMANDS[spec.command](spec)
    except (ColstreamError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
