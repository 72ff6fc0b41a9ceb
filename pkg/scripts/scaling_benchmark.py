#!/usr/bin/env python3
"""Wall time of ACMin against |E_V| + |E_R| on synthetic attributed SBMs.

    python scripts/scaling_benchmark.py --sizes 1e6 2e6 4e6 --te 20 --csv scaling.csv
"""

import argparse
import csv
import sys
import time

from acmin.core import AcminParams, acmin
from acmin.datasets import scaling_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=float, nargs="+", default=[1e6, 2e6, 4e6])
    ap.add_argument("-k", type=int, default=10)
    ap.add_argument("--te", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=2)
    ap.add_argument("--csv", help="also write rows to this file")
    args = ap.parse_args()

    fields = ["entries", "n", "m", "attr_nnz", "seconds", "ortho", "gen_nci", "aamc", "init"]
    rows = []
    writer = csv.DictWriter(sys.stdout, fieldnames=fields)
    writer.writeheader()
    for size in args.sizes:
        g = scaling_graph(int(size), k=args.k, seed=0)
        best, timings = float("inf"), {}
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            res = acmin(g, AcminParams(k=args.k, t_e=args.te, tol=0.0))
            took = time.perf_counter() - t0
            if took < best:
                best, timings = took, res.timings
        row = {"entries": g.m + g.attrs.nnz, "n": g.n, "m": g.m, "attr_nnz": g.attrs.nnz,
               "seconds": round(best, 3), **{k: round(timings[k], 3) for k in ("ortho", "gen_nci", "aamc", "init")}}
        rows.append(row)
        writer.writerow(row)
        sys.stdout.flush()
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
    for a, b in zip(rows, rows[1:]):
        print(f"# {a['entries']} -> {b['entries']}: x{b['seconds'] / a['seconds']:.2f}", file=sys.stderr)


if __name__ == "__main__":
    main()
