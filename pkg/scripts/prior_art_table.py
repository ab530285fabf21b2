#!/usr/bin/env python3
"""Evaluation values for the builtin accelerator table, plus the normalized
power/area comparison for accelerators under 10 mm^2."""

import argparse
import csv
import sys

from colstream.priorart import builtin_dataset, normalize, validate_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--target-gops", type=float, default=100.0)
    ap.add_argument("--max-area", type=float, default=10.0)
    args = ap.parse_args()

    recs = builtin_dataset()
    print("name                  E computed   E table    delta")
    for r in sorted(validate_dataset(recs), key=lambda r: -r.computed_e):
        print(f"{r.name:<20} {r.computed_e:>11.2f} {r.paper_e:>9.2f} {r.relative_delta:>8.3%}")

    small = [r for r in recs if r.area_mm2 < args.max_area]
    print(f"\nnormalized to {args.target_gops:g} GOPs (area < {args.max_area:g} mm^2):")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["name", "compute_gops", "power_w", "area_mm2"])
    for r in normalize(small, args.target_gops):
        w.writerow([r.name, r.compute_gops, f"{r.power_w:.4f}", f"{r.area_mm2:.4f}"])


if __name__ == "__main__":
    main()
