"""Command-line entry point: ``entroute {gen,paths,star,tree,sweep,verify}``.

Exit codes: 0 success, 2 usage or input error, 3 no spanning star exists.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import netgen
from .algebra import BranchMetrics, contract
from .ghz import (
    Branch,
    DistributionTree,
    TreeError,
    best_tree_fidelity,
    coordination_time,
    tree_fidelity,
    tree_rate,
)
from .mosp import label_key, shortest_paths
from .netmodel import NetworkError, dump_network, read_network, validate_terminals
from .star import t_star_exact
from .sweep import SweepConfigError, load_sweep_config, run_sweep, write_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def cmd_gen(args: argparse.Namespace) -> int:
    cfg = netgen.GeneratorConfig(
        model=args.model,
        N=args.n,
        avg_degree=args.avg_degree,
        p_min=args.p_min,
        t_min=args.t_min,
        t_max=args.t_max,
        sigma_min=args.sigma_min,
        sigma_max=args.sigma_max,
        f_trunc=args.f_trunc,
        alpha=args.alpha,
        seed=args.seed,
    )
    _emit(dump_network(netgen.generate(cfg)), args.output)
    return EXIT_OK


def _path_record(sig) -> dict:
    return {
        "p": sig.p,
        "t": sig.t,
        "gamma": sig.gamma,
        "inv_sigma": sig.inv_sigma,
        "F_contracted": contract(sig).F,
        "nodes": list(sig.nodes),
    }


def paths_report(net, source: str, *, multiplicity: bool = False, front_cap: int | None = None) -> dict:
    fronts = shortest_paths(net, source, multiplicity=multiplicity, front_cap=front_cap)
    return {
        "source": source,
        "approximate": front_cap is not None,
        "fronts": {
            node: [_path_record(s) for s in sorted(fronts[node], key=label_key)] for node in net.node_ids
        },
    }


def cmd_paths(args: argparse.Namespace) -> int:
    net = read_network(args.network)
    if args.source not in net:
        raise UsageError(f"unknown source node {args.source!r}")
    report = paths_report(net, args.source, multiplicity=args.multiplicity, front_cap=args.front_cap)
    _emit(_json(report), args.output)
    return EXIT_OK


def star_report(result) -> dict:
    if result.solutions:
        status, reason = "ok", None
    elif result.status == "ok":
        status, reason = "no spanning star", "every optimal star reuses a link"
    else:
        status, reason = "no spanning star", result.status
    return {
        "status": status,
        "reason": reason,
        "complete": result.complete,
        "candidate_centers": len(result.centers),
        "discarded_overlap": result.discarded_overlap,
        "solutions": [
            {
                "center": s.center,
                "xi": s.xi,
                "f": s.f,
                "overlap": s.overlap,
                "branches": {tau: list(sig.nodes) for tau, sig in zip(s.terminals, s.branch_paths)},
            }
            for s in result.solutions
        ],
    }


def cmd_star(args: argparse.Namespace) -> int:
    net = read_network(args.network)
    terminals = validate_terminals(net, [t for t in args.terminals.split(",") if t])
    result = t_star_exact(net, terminals, disjoint=args.disjoint)
    report = star_report(result)
    _emit(_json(report), args.output)
    if not result.solutions:
        print(f"no spanning star ({report['reason']})", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def load_tree(text: str) -> DistributionTree:
    doc = json.loads(text)
    try:
        branches = tuple(
            Branch(b["u"], b["v"], BranchMetrics(float(b["p"]), float(b["t"]), float(b["F"])))
            for b in doc["branches"]
        )
        return DistributionTree(branches, tuple(doc["terminals"]))
    except (KeyError, TypeError) as exc:
        raise TreeError(f"malformed tree document: {exc}") from exc


def cmd_tree(args: argparse.Namespace) -> int:
    with open(args.tree, encoding="utf-8") as fh:
        tree = load_tree(fh.read())
    if args.best_initial:
        initial, f = best_tree_fidelity(tree)
    else:
        initial = args.initial or min(tree.terminals)
        f = tree_fidelity(tree, initial)
    center, _ = coordination_time(tree)
    report = {
        "xi": tree_rate(tree, args.steiner_factor),
        "f": f,
        "initial": initial,
        "coordination_center": center,
        "steiner": sorted(tree.steiner),
    }
    _emit(_json(report), args.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_sweep_config(args.config)
    rows = run_sweep(cfg, jobs=args.jobs, timing=not args.no_timing, progress=args.progress)
    if args.output in (None, "-"):
        write_sweep(rows, sys.stdout, timing=not args.no_timing)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_sweep(rows, fh, timing=not args.no_timing)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_suites

    report = run_suites(seed=args.seed, out=sys.stdout, timing=args.timing)
    return EXIT_OK if report.passed else 1


def _default_jobs() -> int:
    import os

    try:
        return max(1, int(os.environ.get("ENTROUTE_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entroute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random network file")
    g.add_argument("--model", default="er", help="er | rgg (or erdos_renyi | random_geometric)")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--avg-degree", type=float, default=3.0)
    g.add_argument("--p-min", type=float, default=0.5)
    g.add_argument("--t-min", type=float, default=1.0)
    g.add_argument("--t-max", type=float, default=100.0)
    g.add_argument("--sigma-min", type=float, default=1e4)
    g.add_argument("--sigma-max", type=float, default=1e5)
    g.add_argument("--f-trunc", type=float, default=0.9)
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("paths", help="Pareto path fronts from one source")
    p.add_argument("network")
    p.add_argument("--source", required=True)
    p.add_argument("--multiplicity", action="store_true", help="keep equal-metric paths with distinct routes")
    p.add_argument("--front-cap", type=int, help="bound each front (approximation)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_paths)

    s = sub.add_parser("star", help="Pareto-optimal GHZ distribution stars")
    s.add_argument("network")
    s.add_argument("--terminals", required=True, help="comma-separated node ids")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--disjoint", action="store_true", help="drop stars that reuse a link")
    mode.add_argument("--keep-overlap", action="store_true", help="keep stars that reuse a link (default)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_star)

    t = sub.add_parser("tree", help="rate and fidelity of a given distribution tree")
    t.add_argument("tree")
    t.add_argument("--initial", help="initial terminal (default: smallest id)")
    t.add_argument("--best-initial", action="store_true", help="maximise fidelity over the initial terminal")
    t.add_argument("--steiner-factor", type=float, help="time multiplier per Steiner node")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_tree)

    w = sub.add_parser("sweep", help="batch experiment over random networks, CSV output")
    w.add_argument("config")
    w.add_argument("--jobs", type=int, default=_default_jobs())
    w.add_argument("--no-timing", action="store_true", help="leave runtime columns empty (byte-stable output)")
    w.add_argument("--progress", action="store_true")
    w.add_argument("-o", "--output")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="closed forms vs oracle, algebra laws, solvers vs brute force")
    v.add_argument("--seed", type=int, default=2021)
    v.add_argument("--timing", action="store_true", help="print per-suite wall-clock time")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NetworkError, TreeError, netgen.ConfigError, SweepConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"entroute {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
