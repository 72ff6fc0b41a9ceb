"""Command line entry point: ``acmin {cluster,eval,oracle,convert}``.

Exit codes: 0 success, 2 invalid input, 3 refused because a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .core import AcminParams, Nci, acmin, approx_aamc
from .datasets import read_linqs, write_tsv_dataset
from .graph import ParseError, ValidationError, WalkOperator, load_graph, load_labels
from .metrics import MetricsReport, clustering_accuracy, modularity, nmi
from .oracles import (
    MAX_BRUTE_N,
    MAX_DENSE_N,
    CapExceededError,
    brute_force_min_aamc,
    materialize_s,
    simulate_walks,
    usc,
)

SCHEMA_VERSION = 1
EXIT_INVALID = 2
EXIT_CAP = 3


class UsageError(Exception):
    pass


def _add_walk_args(p):
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--beta", type=float, default=0.35)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acmin", description="Attributed graph clustering and reference oracles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster an attributed graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--attrs")
    p.add_argument("-k", "--clusters", type=int, dest="k")
    _add_walk_args(p)
    p.add_argument("--te", type=int, default=200)
    p.add_argument("--tm", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("acmin", "usc"), default="acmin")
    p.add_argument("--init", choices=("greedy", "random"), default="greedy")
    p.add_argument("-o", "--out", required=True, help="assignment TSV (node<TAB>cluster)")
    p.add_argument("--report", help="run report JSON (default: <out>.report.json)")
    p.add_argument("--max-dense-n", type=int, default=MAX_DENSE_N)
    p.add_argument("--replay", help="take parameters from an earlier run report")

    p = sub.add_parser("eval", help="score a clustering")
    p.add_argument("--pred", required=True, help="assignment TSV")
    p.add_argument("--labels")
    p.add_argument("--graph")
    p.add_argument("--attrs")
    p.add_argument("-k", "--clusters", type=int, dest="k")
    _add_walk_args(p)
    p.add_argument("--metrics", default="ca,nmi")

    p = sub.add_parser("oracle", help="dense / Monte-Carlo / exhaustive references")
    p.add_argument("action", choices=("dense-s", "simulate", "brute-force"))
    p.add_argument("--graph", required=True)
    p.add_argument("--attrs")
    _add_walk_args(p)
    p.add_argument("--t", type=int, help="truncation depth (default ceil(1/alpha))")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--walks", type=int, default=100000)
    p.add_argument("--max-len", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-k", "--clusters", type=int, dest="k", default=2)
    p.add_argument("--max-dense-n", type=int, default=MAX_DENSE_N)
    p.add_argument("--max-brute-n", type=int, default=MAX_BRUTE_N)

    p = sub.add_parser("convert", help="convert LINQS .content/.cites into TSV files")
    p.add_argument("--content", required=True)
    p.add_argument("--cites", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--name", required=True)
    return parser


def read_assignment(path) -> np.ndarray:
    return load_labels(path)


def write_assignment(path, assign) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, c in enumerate(assign):
            fh.write(f"{i}\t{int(c)}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_cluster(args) -> int:
    cfg = {
        "method": args.method, "k": args.k, "alpha": args.alpha, "beta": args.beta,
        "t_e": args.te, "t_m": args.tm, "seed": args.seed, "init": args.init,
        "max_dense_n": args.max_dense_n,
    }
    if args.replay:
        with open(args.replay, encoding="utf-8") as fh:
            cfg.update(json.load(fh)["config"])
    if cfg["k"] is None or cfg["k"] < 1:
        raise UsageError(f"-k must be a positive integer, got {cfg['k']}")
    params = AcminParams(k=cfg["k"], alpha=cfg["alpha"], beta=cfg["beta"], t_e=cfg["t_e"],
                         t_m=cfg["t_m"], seed=cfg["seed"], init=cfg["init"])
    g = load_graph(args.graph, args.attrs)
    if params.k > g.n:
        raise UsageError(f"k={params.k} exceeds node count {g.n}")

    report = {"schema_version": SCHEMA_VERSION, "config": cfg, "seed": cfg["seed"],
              "graph": {"n": g.n, "m": g.m, "d": g.d, "attr_nnz": g.attrs.nnz}}
    t0 = time.perf_counter()
    if cfg["method"] == "acmin":
        res = acmin(g, params)
        assign = res.best_nci.assign
        report.update(res.to_dict(include_timings=True))
        report.pop("assignment")
    else:
        res = usc(g, params, max_n=cfg["max_dense_n"])
        assign = res.nci.assign
        op = WalkOperator(g, params.alpha, params.beta)
        report.update({"best_aamc": approx_aamc(op, res.nci, params.t_walk),
                       "eigen_converged": res.converged})
    report["wall_time"] = time.perf_counter() - t0

    write_assignment(args.out, assign)
    report_path = args.report or f"{args.out}.report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=1)
    return 0


def cmd_eval(args) -> int:
    wanted = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = set(wanted) - {"ca", "nmi", "modularity", "aamc"}
    if unknown:
        raise UsageError(f"unknown metrics: {sorted(unknown)}")
    pred = read_assignment(args.pred)
    k = args.k if args.k is not None else int(pred.max()) + 1
    rep = MetricsReport(k=k, n=len(pred))
    if {"ca", "nmi"} & set(wanted):
        if not args.labels:
            raise UsageError("ca/nmi need --labels")
        truth = load_labels(args.labels, len(pred))
        if "ca" in wanted:
            rep.ca = clustering_accuracy(pred, truth)
            rep.provenance["ca"] = args.labels
        if "nmi" in wanted:
            rep.nmi = nmi(pred, truth)
            rep.provenance["nmi"] = args.labels
    if {"modularity", "aamc"} & set(wanted):
        if not args.graph:
            raise UsageError("modularity/aamc need --graph")
        if "aamc" in wanted and not args.attrs:
            raise UsageError("aamc needs --graph and --attrs")
        g = load_graph(args.graph, args.attrs)
        if g.n != len(pred):
            raise UsageError(f"prediction covers {len(pred)} nodes, graph has {g.n}")
        if "modularity" in wanted:
            rep.modularity = modularity(g, pred)
            rep.provenance["modularity"] = args.graph
        if "aamc" in wanted:
            op = WalkOperator(g, args.alpha, args.beta)
            rep.aamc = approx_aamc(op, Nci(pred, k))
            rep.provenance["aamc"] = f"{args.graph},{args.attrs}"
    out = rep.to_dict()
    out["schema_version"] = SCHEMA_VERSION
    out["provenance"] = rep.provenance
    _emit(out)
    return 0


def cmd_oracle(args) -> int:
    g = load_graph(args.graph, args.attrs)
    op = WalkOperator(g, args.alpha, args.beta)
    out = {"schema_version": SCHEMA_VERSION, "action": args.action, "alpha": args.alpha,
           "beta": args.beta, "n": g.n}
    if args.action == "dense-s":
        s = materialize_s(op, args.t, max_n=args.max_dense_n)
        out.update({"t": s.t, "s": s.s.tolist()})
    elif args.action == "simulate":
        if not 0 <= args.source < g.n:
            raise UsageError(f"source {args.source} outside [0, {g.n})")
        tr = simulate_walks(op, args.source, args.walks, args.max_len, np.random.default_rng(args.seed))
        out.update({"source": tr.source, "n_r": tr.n_r, "counts": tr.counts.tolist(),
                    "max_len": args.max_len, "seed": args.seed})
    else:
        if g.n > args.max_brute_n:
            raise CapExceededError(f"n={g.n} exceeds the enumeration cap of {args.max_brute_n}")
        s = materialize_s(op, args.t, max_n=args.max_dense_n)
        nci, phi = brute_force_min_aamc(s, args.k, max_n=args.max_brute_n)
        out.update({"t": s.t, "k": args.k, "phi_star": phi, "assignment": nci.assign.tolist()})
    _emit(out)
    return 0


def cmd_convert(args) -> int:
    data = read_linqs(args.content, args.cites)
    paths = write_tsv_dataset(data, Path(args.out_dir), args.name)
    with open(Path(args.out_dir) / f"{args.name}.nodes.tsv", "w", encoding="utf-8") as fh:
        for i, name in enumerate(data.node_names):
            fh.write(f"{i}\t{name}\n")
    _emit({"schema_version": SCHEMA_VERSION, "n": data.graph.n, "m": data.graph.m,
           "d": data.graph.d, "classes": data.class_names, **{k: str(v) for k, v in paths.items()}})
    return 0


COMMANDS = {"cluster": cmd_cluster, "eval": cmd_eval, "oracle": cmd_oracle, "convert": cmd_convert}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CapExceededError as exc:
        print(f"acmin: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ParseError, ValidationError, ValueError, FileNotFoundError, KeyError) as exc:
        print(f"acmin: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
