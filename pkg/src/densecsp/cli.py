"""``densecsp`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import SWEEP_ALGORITHMS, sweep
from .config import SolverConfig, default_threads
from .core import (
    DenseCspError,
    DenseGraph,
    encode_maxcut_as_csp,
    read_graph,
    read_instance,
    write_csp,
    write_graph,
)
from .generators import (
    PREDICATES,
    encode_correlation_clustering,
    gen_gnp,
    gen_planted_hard,
    gen_random_rcsp,
    gen_signed_graph,
)
from .maxcut import solve_maxcut
from .oracle import brute_force_csp, brute_force_maxcut
from .parallel import solve_rcsp_parallel
from .rcsp import solve_rcsp
from .report import RunReport, verify


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=2 / 3)
    p.add_argument("--c-schedule", type=float, default=1.0)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--max-seed-exponent", type=float, default=24)
    p.add_argument("--t0", type=int, default=None, help="override ceil(1/eps^2)")
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--json", dest="json_out", help="write the RunReport here")


def _config(args: argparse.Namespace, **extra) -> SolverConfig:
    return SolverConfig(
        delta=args.delta,
        c_schedule=args.c_schedule,
        c1=args.c1,
        max_seed_exponent=args.max_seed_exponent,
        threads=args.threads,
        t0=args.t0,
        **extra,
    )


def _emit(report: RunReport, args: argparse.Namespace) -> None:
    report.instance = str(Path(args.input).resolve())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json())
    summary = {k: v for k, v in report.to_dict().items() if k not in ("assignment", "params")}
    print(json.dumps(summary, sort_keys=True))


def cmd_maxcut(args: argparse.Namespace) -> int:
    graph = read_graph(args.input)
    cfg = _config(
        args,
        independent_orders=args.independent_orders,
        shared_samples=args.shared_samples,
        fixed_branch=args.fixed_branch,
    )
    _emit(solve_maxcut(graph, args.epsilon, cfg, args.seed), args)
    return 0


def cmd_rcsp(args: argparse.Namespace) -> int:
    inst = read_instance(args.input)
    cfg = _config(args, k_factor_exponent=args.k_factor_exponent)
    if args.parallel:
        report = solve_rcsp_parallel(inst, args.epsilon, cfg.threads, cfg, args.seed)
    else:
        if isinstance(inst, DenseGraph):
            inst = encode_maxcut_as_csp(inst)
        report = solve_rcsp(inst, args.epsilon, cfg, args.seed)
    _emit(report, args)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = read_instance(args.input)
    if isinstance(inst, DenseGraph):
        best, value = brute_force_maxcut(inst, args.budget)
    else:
        best, value = brute_force_csp(inst, args.budget)
    report = RunReport("oracle", value, best, params={"n": inst.n, "budget": args.budget})
    args.json_out = args.json
    _emit(report, args)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if args.kind == "gnp":
        write_graph(gen_gnp(args.n, args.p, args.seed), out)
    elif args.kind == "planted":
        inst = gen_planted_hard(args.n, args.epsilon, args.seed, args.bias)
        write_graph(inst.graph, out)
        out.with_name(out.name + ".planted.json").write_text(json.dumps(inst.sidecar(), sort_keys=True) + "\n")
    elif args.kind == "rcsp":
        write_csp(gen_random_rcsp(args.n, args.k, args.r, args.density, args.predicate, args.seed), out)
    elif args.kind == "corrclust":
        signed = gen_signed_graph(args.n, args.density, args.p_plus, args.seed)
        write_csp(encode_correlation_clustering(signed, args.k), out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = SolverConfig(
        delta=args.delta, c_schedule=args.c_schedule, c1=args.c1,
        max_seed_exponent=args.max_seed_exponent, threads=1, fixed_branch=args.fixed_branch,
    )
    sweep(
        args.instance, args.algorithm, args.epsilon, args.seeds,
        out=args.out or sys.stdout, config=cfg, timing=args.timing,
        assignments_out=args.assignments, workers=args.threads, gnuplot_out=args.gnuplot,
    )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify(args.report, args.instance)
    failed = False
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}" + (f": {r.message}" if r.message else ""))
        failed |= not r.ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="densecsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maxcut", help="subsampled greedy Max-Cut")
    _solver_flags(p)
    p.add_argument("--independent-orders", action="store_true", help="fresh placement order per branch")
    p.add_argument("--shared-samples", action="store_true", help="same sample stream in every branch")
    p.add_argument("--fixed-branch", type=int, default=None, help="run a single seed branch")
    p.set_defaults(func=cmd_maxcut)

    p = sub.add_parser("rcsp", help="two-phase greedy for r-CSPs")
    _solver_flags(p)
    p.add_argument("--k-factor-exponent", type=float, default=4.0)
    p.add_argument("--parallel", action="store_true", help="superstep phase 2")
    p.set_defaults(func=cmd_rcsp)

    p = sub.add_parser("oracle", help="exact optimum by enumeration")
    p.add_argument("--input", required=True)
    p.add_argument("--budget", type=float, default=26)
    p.add_argument("--json")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("kind", choices=["gnp", "planted", "rcsp", "corrclust"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5, help="gnp edge probability")
    p.add_argument("--epsilon", type=float, default=0.1, help="planted bias")
    p.add_argument("--bias", choices=["relative", "additive"], default="relative")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--predicate", choices=PREDICATES, default="random-table")
    p.add_argument("--p-plus", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="batch experiments to CSV")
    p.add_argument("--instance", action="append", default=[], help="instance spec, repeatable")
    p.add_argument("--algorithm", action="append", default=[], choices=SWEEP_ALGORITHMS)
    p.add_argument("--epsilon", action="append", type=float, default=[])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--delta", type=float, default=2 / 3)
    p.add_argument("--c-schedule", type=float, default=1.0)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--max-seed-exponent", type=float, default=24)
    p.add_argument("--fixed-branch", type=int, default=None)
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--timing", action="store_true", help="add a wall_ms column")
    p.add_argument("--assignments", help="JSON-lines file of emitted assignments")
    p.add_argument("--gnuplot", help="summary table for gnuplot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="re-check a RunReport JSON")
    p.add_argument("report")
    p.add_argument("--instance", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DenseCspError, FileNotFoundError) as exc:
        print(f"densecsp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
