#!/usr/bin/env python3
"""Cycle comparison sweep: column streaming vs. the 3x3-padded baseline.

Usage:
    python scripts/fig12_sweep.py                # n=227, writes results/fig12.{csv,svg}
    python scripts/fig12_sweep.py --n 112 --simulate
"""

import argparse
from pathlib import Path

from colstream.cycles import compare_sweep, rows_to_csv, rows_to_svg
from colstream.engine import run_conv
from colstream.rng import random_layer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=227)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--simulate", action="store_true",
                    help="also run the engine per k and check it against the formula")
    args = ap.parse_args()

    rows = compare_sweep(args.n)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "fig12.csv").write_text(rows_to_csv(rows))
    (out / "fig12.svg").write_text(rows_to_svg(rows, args.n))

    print(f"{'k':>3} {'this':>10} {'baseline':>10} {'ratio':>7}  verdict")
    for r in rows:
        line = f"{r.k:>3} {r.cycles_this:>10,} {r.cycles_baseline:>10,} {r.ratio:>7.3f}  {r.classification}"
        if args.simulate:
            sim = run_conv(*random_layer(r.k, args.n, r.k)).total_cycles
            line += f"  sim={sim:,} {'ok' if sim == r.cycles_this else 'MISMATCH'}"
        print(line)
    print(f"wrote {out / 'fig12.csv'} and {out / 'fig12.svg'}")


if __name__ == "__main__":
    main()
