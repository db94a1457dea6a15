"""Command-line front-end: detect / generate / knn / eval.

All randomness flows from --seed.  Reports are JSON; bulk tables are CSV so
the Q-vs-n-hat curve and traces can be plotted with any external tool.  The
environment variable MODMBO_EIG_CACHE, when set, points at a directory used
to reuse eigenbases across processes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .eigen import cached_eigenpairs, default_n_eig
from .functional import Partition, modularity
from .graph import laplacian
from .mbo import MboConfig, run_mbo
from .metrics import nmi, purity
from .pipeline import (PlantedPartitionSpec, knn_graph, planted_partition,
                       read_edge_list, read_features, read_labels,
                       read_partition, write_edge_list, write_partition)
from .schemes import SchemeConfig, run_multi_n, run_rmm


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modmbo",
        description="Community detection by TV-energy minimization with an "
                    "MBO threshold-dynamics scheme.")
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detect", help="run a detection scheme on a graph")
    det.add_argument("--graph", required=True, help="edge-list file")
    det.add_argument("--scheme", required=True, choices=["mbo", "rmm", "multi"])
    det.add_argument("--gamma", type=float, default=1.0)
    det.add_argument("--nhat", type=int, help="community budget (mbo only)")
    det.add_argument("--nrange", help="inclusive n-hat range A..B (multi only)")
    det.add_argument("--neig", type=int, help="eigenbasis size")
    det.add_argument("--eta", type=int, default=5)
    det.add_argument("--dt", type=float, default=1.0)
    det.add_argument("--max-iter", type=int, default=500)
    det.add_argument("--seed", type=int, default=0)
    det.add_argument("--known-labels", help="partial node,community CSV")
    det.add_argument("--truth", help="ground-truth partition CSV")
    det.add_argument("--out", required=True, help="output directory")

    gen = sub.add_parser("generate", help="write a planted-partition benchmark")
    gen.add_argument("--planted", required=True,
                     help="N,BLOCKS,P_IN,P_OUT (e.g. 500,10,0.3,0.01)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output directory")

    knn = sub.add_parser("knn", help="build a k-NN similarity graph")
    knn.add_argument("--features", required=True, help="feature CSV")
    knn.add_argument("--k", type=int, required=True)
    knn.add_argument("--out", required=True, help="edge-list output path")

    ev = sub.add_parser("eval", help="score a partition file")
    ev.add_argument("--partition", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--graph", required=True)
    ev.add_argument("--gamma", type=float, default=1.0)

    return parser


def _parse_nrange(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ValueError(f"--nrange must look like A..B, got {text!r}") from None
    if lo > hi:
        raise ValueError(f"--nrange is empty: {text!r}")
    return lo, hi


def _cmd_detect(args) -> int:
    if args.scheme == "mbo" and args.nhat is None:
        raise ValueError("--nhat is required for --scheme mbo")
    if args.scheme != "mbo" and args.nhat is not None:
        raise ValueError("--nhat is only valid for --scheme mbo")
    if args.scheme == "multi" and args.nrange is None:
        raise ValueError("--nrange is required for --scheme multi")
    if args.scheme != "multi" and args.nrange is not None:
        raise ValueError("--nrange is only valid for --scheme multi")

    t_total = time.perf_counter()
    g = read_edge_list(args.graph)
    known = read_labels(args.known_labels) if args.known_labels else None
    truth = read_partition(args.truth, n_nodes=g.n_nodes) if args.truth else None

    n_eig = args.neig if args.neig is not None else default_n_eig(g.n_nodes)
    n_eig = min(n_eig, g.n_nodes)
    mbo_cfg = MboConfig(gamma=args.gamma, n_hat=args.nhat or 2, eta=args.eta,
                        dt=args.dt, n_eig=n_eig, max_iter=args.max_iter,
                        seed=args.seed, known_labels=known)
    cache_dir = os.environ.get("MODMBO_EIG_CACHE") or None

    eig_ms = 0.0
    q_trace: list[float] = []
    sweep_rows = None
    t_detect = time.perf_counter()
    if args.scheme == "rmm":
        cfg = SchemeConfig(mbo=mbo_cfg)
        partition = run_rmm(g, cfg)
    else:
        t_eig = time.perf_counter()
        basis = cached_eigenpairs(g, laplacian(g), n_eig, seed=0,
                                  cache_dir=cache_dir)
        eig_ms = (time.perf_counter() - t_eig) * 1e3
        if args.scheme == "mbo":
            result = run_mbo(g, basis, mbo_cfg)
            partition = result.partition
            q_trace = result.q_trace
        else:
            cfg = SchemeConfig(mbo=mbo_cfg, multi_n_range=_parse_nrange(args.nrange))
            sweep = run_multi_n(g, basis, cfg)
            partition = sweep.partition
            q_trace = sweep.q_trace
            sweep_rows = sweep.entries
    detect_ms = (time.perf_counter() - t_detect) * 1e3

    os.makedirs(args.out, exist_ok=True)
    partition_path = os.path.join(args.out, "partition.csv")
    write_partition(partition, partition_path)

    metrics = {
        "modularity": modularity(g, partition, args.gamma),
        "n_communities": partition.n_communities,
        "runtime_ms": (time.perf_counter() - t_total) * 1e3,
    }
    if truth is not None:
        metrics["nmi"] = nmi(partition, truth)
        metrics["purity"] = purity(partition, truth)

    report = {
        "config": {
            "graph": args.graph, "scheme": args.scheme, "gamma": args.gamma,
            "nhat": args.nhat, "nrange": args.nrange, "neig": n_eig,
            "eta": args.eta, "dt": args.dt, "max_iter": args.max_iter,
            "seed": args.seed, "known_labels": args.known_labels,
            "truth": args.truth,
        },
        "partition_file": partition_path,
        "metrics": metrics,
        "q_trace": q_trace,
        "n_iterations": len(q_trace) if q_trace else None,
        "timings_ms": {"eigensolve": eig_ms, "detect": detect_ms,
                       "total": metrics["runtime_ms"]},
    }
    if sweep_rows is not None:
        table_path = os.path.join(args.out, "q_vs_nhat.csv")
        with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("nhat,restart,seed,q,n_communities,n_iterations\n")
            for row in sweep_rows:
                fh.write(f"{row.n_hat},{row.restart},{row.seed},{row.q!r},"
                         f"{row.n_communities},{row.n_iterations}\n")
        report["q_vs_nhat_file"] = table_path

    report_path = os.path.join(args.out, "report.json")
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"report": report_path, **metrics}))
    return 0


def _cmd_generate(args) -> int:
    parts = args.planted.split(",")
    if len(parts) != 4:
        raise ValueError("--planted must be N,BLOCKS,P_IN,P_OUT")
    spec = PlantedPartitionSpec(n_nodes=int(parts[0]), n_blocks=int(parts[1]),
                                p_in=float(parts[2]), p_out=float(parts[3]),
                                seed=args.seed)
    g, truth = planted_partition(spec)
    os.makedirs(args.out, exist_ok=True)
    graph_path = os.path.join(args.out, "graph.tsv")
    truth_path = os.path.join(args.out, "truth.csv")
    write_edge_list(g, graph_path)
    write_partition(truth, truth_path)
    print(json.dumps({"graph": graph_path, "truth": truth_path,
                      "n_nodes": g.n_nodes, "n_edges": g.n_edges}))
    return 0


def _cmd_knn(args) -> int:
    features = read_features(args.features)
    g = knn_graph(features, args.k)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    write_edge_list(g, args.out)
    print(json.dumps({"graph": args.out, "n_nodes": g.n_nodes,
                      "n_edges": g.n_edges}))
    return 0


def _cmd_eval(args) -> int:
    g = read_edge_list(args.graph)
    part = read_partition(args.partition, n_nodes=g.n_nodes)
    truth = read_partition(args.truth, n_nodes=g.n_nodes)
    out = {
        "nmi": nmi(part, truth),
        "purity": purity(part, truth),
        "modularity": modularity(g, part, args.gamma),
        "n_communities": part.n_communities,
    }
    print(json.dumps(out))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"detect": _cmd_detect, "generate": _cmd_generate,
                "knn": _cmd_knn, "eval": _cmd_eval}
    try:
        return handlers[args.command](args)
    except Exception as exc:  # surface module errors as clean diagnostics
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
