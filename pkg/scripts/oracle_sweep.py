#!/usr/bin/env python3
"""Random engine-vs-oracle sweep; reports any mismatch and the throughput."""

import argparse
import time

import numpy as np

from colstream.engine import verify_against_oracle
from colstream.rng import random_layer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    bad = 0
    for i in range(args.cases):
        k = int(g.integers(3, 12))
        n = int(g.integers(k, args.max_n + 1))
        C, F = int(g.integers(1, 4)), int(g.integers(1, 3))
        res = verify_against_oracle(*random_layer(i, n, k, C, F))
        if not res.equal:
            bad += 1
            print(f"mismatch: seed={i} n={n} k={k} C={C} F={F} max_diff={res.max_abs_diff}")
    dt = time.perf_counter() - t0
    print(f"{args.cases - bad}/{args.cases} exact in {dt:.1f}s")


if __name__ == "__main__":
    main()
