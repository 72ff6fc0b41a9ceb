#!/usr/bin/env python3
"""ACMin vs USC on a labeled dataset (Cora / Citeseer layout) or the synthetic surrogate.

    python scripts/run_benchmark.py --dataset cora -k 7
    python scripts/run_benchmark.py --surrogate

Prints one JSON line per method with CA, NMI, modularity, AAMC and wall time.
"""

import argparse
import json
import sys
import time

from acmin.core import AcminParams, Nci, acmin, approx_aamc
from acmin.datasets import cora_like, data_dir, find_dataset
from acmin.graph import WalkOperator
from acmin.metrics import clustering_accuracy, modularity, nmi
from acmin.oracles import usc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", default="cora")
    ap.add_argument("--surrogate", action="store_true", help="use the synthetic Cora-shaped graph")
    ap.add_argument("-k", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-usc", action="store_true")
    args = ap.parse_args()

    if args.surrogate:
        data, name = cora_like(args.seed), "cora_like"
    else:
        data, name = find_dataset(args.dataset), args.dataset
        if data is None:
            sys.exit(f"{args.dataset} not found under {data_dir()} (set ACMIN_DATA or use --surrogate)")
    g = data.graph
    params = AcminParams(k=args.k, seed=args.seed)
    op = WalkOperator(g, params.alpha, params.beta)

    runs = [("acmin", lambda: acmin(g, params).best_nci)]
    if not args.skip_usc:
        runs.append(("usc", lambda: usc(g, params).nci))
    for method, fn in runs:
        t0 = time.perf_counter()
        y = fn()
        elapsed = time.perf_counter() - t0
        row = {"dataset": name, "method": method, "n": g.n, "k": args.k, "seconds": round(elapsed, 2),
               "aamc": approx_aamc(op, y, params.t_walk), "modularity": modularity(g, y)}
        if data.labels is not None:
            row["ca"] = clustering_accuracy(y, data.labels)
            row["nmi"] = nmi(y, data.labels)
        print(json.dumps(row))
    if data.labels is not None:
        truth = Nci(data.labels, int(data.labels.max()) + 1)
        print(json.dumps({"dataset": name, "method": "ground_truth", "aamc": approx_aamc(op, truth, params.t_walk)}))


if __name__ == "__main__":
    main()
