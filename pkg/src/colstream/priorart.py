"""Evaluation value E = cFixed16 / (power * area) for prior-art accelerators.

``compute_gops`` is always the 16-bit-fixed-equivalent figure. Raw figures
quoted at other precisions are converted with ``PRECISION_FACTORS``; any
precision not listed there is taken as-is.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

from .errors import InvalidArgumentError, InvalidRecordError

PRECISION_FACTORS = {
    "INT8": 0.5,
}

CSV_HEADER = ("name", "year", "compute_gops", "precision", "power_w", "area_mm2",
              "area_kind", "paper_e")


def to_fixed16(raw_gops: float, precision: str) -> float:
    return raw_gops * PRECISION_FACTORS.get(precision, 1.0)


@dataclass(frozen=True)
class AcceleratorRecord:
    name: str
    year: int
    compute_gops: float
    precision_label: str
    power_w: float
    area_mm2: float
    area_kind: str = "chip"
    paper_e: float | None = None

    def check(self) -> None:
        for attr in ("compute_gops", "power_w", "area_mm2"):
            if not getattr(self, attr) > 0:
                raise InvalidRecordError(f"{self.name}: {attr} must be positive")


def evaluation_value(rec: AcceleratorRecord) -> float:
    rec.check()
    return rec.compute_gops / (rec.power_w * rec.area_mm2)


# Edge TPU: "4 TOPs" read as 4096 GOPs at INT8, halved to 2048 GOPs.
_BUILTIN = (
    AcceleratorRecord("Kneron", 2018, 152.0, "16-bit Fixed", 0.350, 5.0, "core", 86.86),
    AcceleratorRecord("Eyeriss (chip)", 2016, 84.0, "16-bit Fixed", 0.278, 16.0, "chip", 18.88),
    AcceleratorRecord("Eyeriss (core)", 2016, 84.0, "16-bit Fixed", 0.278, 12.25, "core", 24.66),
    AcceleratorRecord("1.42TOPS/W", 2016, 64.0, "16-bit Fixed", 0.045, 16.0, "chip", 88.88),
    AcceleratorRecord("Edge TPU", 2018, to_fixed16(4096.0, "INT8"), "INT8", 2.0, 25.0, "chip", 40.96),
    AcceleratorRecord("ADRES", 2017, 26.4, "32-bit FP", 0.1156, 0.64, "chip", 356.84),
    AcceleratorRecord("VERSAT", 2016, 7.02, "32-bit Fixed", 0.044, 0.4, "chip", 398.86),
    AcceleratorRecord("SOFT-BRAIN", 2017, 452.0, "64-bit Fixed", 0.9544, 3.76, "chip", 125.96),
    AcceleratorRecord("REDEFINE", 2016, 201.6, "32-bit Fixed", 1.22, 5.7, "chip", 29.48),
    AcceleratorRecord("DT-CGRA", 2016, 95.0, "16-bit Fixed", 1.79, 3.79, "chip", 14.0),
    AcceleratorRecord("PULP", 2018, 0.170, "16-bit Fixed", 0.00044, 0.872, "chip", 443.08),
)


def builtin_dataset() -> list[AcceleratorRecord]:
    return list(_BUILTIN)


@dataclass(frozen=True)
class ValidationRow:
    name: str
    computed_e: float
    paper_e: float | None
    relative_delta: float | None


def validate_dataset(records) -> list[ValidationRow]:
    out = []
    for rec in records:
        e = evaluation_value(rec)
        delta = abs(e - rec.paper_e) / rec.paper_e if rec.paper_e else None
        out.append(ValidationRow(rec.name, e, rec.paper_e, delta))
    return out


def normalize(records, target_gops: float) -> list[AcceleratorRecord]:
    """Scale compute, power and area linearly so every record delivers ``target_gops``.

    E is not preserved by this scaling, so ``paper_e`` is dropped.
    """
    if not target_gops > 0:
        raise InvalidRecordError("target compute must be positive")
    out = []
    for rec in records:
        rec.check()
        f = target_gops / rec.compute_gops
        out.append(replace(rec, compute_gops=float(target_gops), power_w=rec.power_w * f,
                           area_mm2=rec.area_mm2 * f, paper_e=None))
    return out


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.name, r.year, repr(r.compute_gops), r.precision_label, repr(r.power_w),
                    repr(r.area_mm2), r.area_kind, "" if r.paper_e is None else repr(r.paper_e)])
    return buf.getvalue()


def records_from_csv(text: str) -> list[AcceleratorRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise InvalidArgumentError(f"unexpected dataset header {reader.fieldnames}")
    out = []
    for row in reader:
        try:
            rec = AcceleratorRecord(
                name=row["name"], year=int(row["year"]),
                compute_gops=float(row["compute_gops"]), precision_label=row["precision"],
                power_w=float(row["power_w"]), area_mm2=float(row["area_mm2"]),
                area_kind=row["area_kind"],
                paper_e=float(row["paper_e"]) if row["paper_e"] else None)
        except (TypeError, ValueError) as exc:
            raise InvalidRecordError(f"bad dataset row {row}: {exc}") from exc
        rec.check()
        out.append(rec)
    return out
