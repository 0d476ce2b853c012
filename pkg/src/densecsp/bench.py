"""Batch experiments: error-vs-epsilon and probes-vs-n sweeps written as CSV.

Instances are named by compact spec strings::

    gnp:n=14,p=0.5,seed=3
    planted:n=900,eps=0.1,seed=0
    rcsp:n=10,k=2,r=2,density=1,predicate=random-table,seed=0
    corrclust:n=8,k=3,density=1,p_plus=0.5,seed=0
    file:path/to/instance.txt
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import SolverConfig
from .core import CspInstance, DenseCspError, DenseGraph, encode_maxcut_as_csp, read_instance
from .generators import (
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
from .report import RunReport

COLUMNS = [
    "kind", "instance", "algorithm", "epsilon", "seed", "n", "value", "opt", "opt_source",
    "error", "error_norm", "probes", "audit_probes",
]
SWEEP_ALGORITHMS = ("maxcut", "rcsp", "rcsp-parallel", "exact-greedy", "oracle")


@dataclass
class LoadedInstance:
    name: str
    problem: DenseGraph | CspInstance
    planted_value: int | None = None

    @property
    def arity(self) -> int:
        return 2 if isinstance(self.problem, DenseGraph) else self.problem.r


def parse_instance_spec(spec: str) -> LoadedInstance:
    kind, _, rest = spec.partition(":")
    if kind == "file":
        return LoadedInstance(spec, read_instance(rest))
    opts = dict(item.split("=", 1) for item in rest.split(",") if item)
    seed = int(opts.get("seed", 0))
    if kind == "gnp":
        return LoadedInstance(spec, gen_gnp(int(opts["n"]), float(opts.get("p", 0.5)), seed))
    if kind == "planted":
        inst = gen_planted_hard(int(opts["n"]), float(opts["eps"]), seed, opts.get("bias", "relative"))
        return LoadedInstance(spec, inst.graph, inst.planted_value())
    if kind == "rcsp":
        return LoadedInstance(spec, gen_random_rcsp(
            int(opts["n"]), int(opts.get("k", 2)), int(opts.get("r", 2)),
            float(opts.get("density", 1.0)), opts.get("predicate", "random-table"), seed,
        ))
    if kind == "corrclust":
        signed = gen_signed_graph(
            int(opts["n"]), float(opts.get("density", 1.0)), float(opts.get("p_plus", 0.5)), seed
        )
        return LoadedInstance(spec, encode_correlation_clustering(signed, int(opts.get("k", 2))))
    raise DenseCspError(f"unknown instance kind {kind!r} in {spec!r}")


def optimum(inst: LoadedInstance, budget: float) -> tuple[int | None, str]:
    p = inst.problem
    try:
        if isinstance(p, DenseGraph):
            return brute_force_maxcut(p, budget)[1], "oracle"
        return brute_force_csp(p, budget)[1], "oracle"
    except DenseCspError:
        pass
    if inst.planted_value is not None:
        return inst.planted_value, "planted"
    return None, "NA"


def run_algorithm(
    algorithm: str, problem: DenseGraph | CspInstance, epsilon: float, config: SolverConfig, seed: int
) -> RunReport:
    problem = problem.fresh_view()
    if algorithm == "maxcut":
        if not isinstance(problem, DenseGraph):
            raise DenseCspError("maxcut needs a graph instance")
        return solve_maxcut(problem, epsilon, config, seed)
    if algorithm == "exact-greedy":
        cfg = config.with_(full_sampling=True)
        report = (solve_maxcut if isinstance(problem, DenseGraph) else solve_rcsp)(problem, epsilon, cfg, seed)
        report.algorithm = "exact-greedy"
        return report
    if isinstance(problem, DenseGraph):
        problem = encode_maxcut_as_csp(problem)
    if algorithm == "rcsp":
        return solve_rcsp(problem, epsilon, config, seed)
    if algorithm == "rcsp-parallel":
        return solve_rcsp_parallel(problem, epsilon, max(1, config.threads), config, seed)
    raise DenseCspError(f"unknown algorithm {algorithm!r}")


def _fmt(x: float | int | None) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.6f}"


def sweep(
    instances: Sequence[str],
    algorithms: Sequence[str],
    epsilons: Sequence[float],
    seeds: int,
    out: str | Path | io.TextIOBase | None = None,
    config: SolverConfig | None = None,
    timing: bool = False,
    assignments_out: str | Path | None = None,
    workers: int = 1,
    gnuplot_out: str | Path | None = None,
) -> list[dict]:
    """Run every (instance, algorithm, epsilon, seed) cell and tabulate.

    Rows come out in cell order whatever the completion order, so identical
    arguments give byte-identical CSV. ``wall_ms`` is only emitted with
    ``timing=True`` for that reason.
    """
    config = config or SolverConfig()
    for alg in algorithms:
        if alg not in SWEEP_ALGORITHMS:
            raise DenseCspError(f"unknown algorithm {alg!r}")
    loaded = [parse_instance_spec(s) for s in instances] if algorithms else []
    optima = [optimum(inst, config.oracle_budget) for inst in loaded]
    cells = [
        (i, alg, eps, seed)
        for i in range(len(loaded))
        for alg in algorithms
        for eps in epsilons
        for seed in range(seeds)
    ]

    def run_cell(cell):
        i, alg, eps, seed = cell
        inst = loaded[i]
        if alg == "oracle":
            return None
        return run_algorithm(alg, inst.problem, eps, config, seed)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(run_cell, cells))
    else:
        reports = [run_cell(c) for c in cells]

    rows: list[dict] = []
    groups: dict[tuple, list[dict]] = {}
    assignment_lines = []
    for cell, report in zip(cells, reports):
        i, alg, eps, seed = cell
        inst = loaded[i]
        opt, source = optima[i]
        n = inst.problem.n
        if report is None:
            if opt is None:
                continue
            value, probes, audit = opt, 0, 0
        else:
            value, probes, audit = report.value, report.probes, report.audit_probes
        error = None if opt is None else opt - value
        row = {
            "kind": "run", "instance": inst.name, "algorithm": alg, "epsilon": eps, "seed": seed,
            "n": n, "value": value, "opt": "NA" if opt is None else opt, "opt_source": source,
            "error": error, "error_norm": None if error is None else error / n**inst.arity,
            "probes": probes, "audit_probes": audit,
        }
        if timing:
            row["wall_ms"] = report.wall_ms if report is not None else 0.0
        rows.append(row)
        groups.setdefault((inst.name, alg, eps), []).append(row)
        if report is not None:
            assignment_lines.append(json.dumps({
                "instance": inst.name, "algorithm": alg, "epsilon": eps, "seed": seed,
                "value": report.value, "assignment": report.assignment.tolist(),
            }, sort_keys=True))

    summary = []
    for (name, alg, eps), members in groups.items():
        for kind, fn in (("mean", statistics.fmean), ("std", _std)):
            row = {"kind": kind, "instance": name, "algorithm": alg, "epsilon": eps, "seed": None,
                   "n": members[0]["n"], "opt": members[0]["opt"], "opt_source": members[0]["opt_source"]}
            for col in ("value", "error", "error_norm", "probes", "audit_probes"):
                data = [m[col] for m in members if m[col] is not None]
                row[col] = fn(data) if data else None
            if timing:
                row["wall_ms"] = fn([m["wall_ms"] for m in members])
            summary.append(row)
    rows.extend(summary)

    if out is not None:
        write_csv(rows, out, timing)
    if assignments_out is not None:
        Path(assignments_out).write_text("".join(line + "\n" for line in assignment_lines))
    if gnuplot_out is not None:
        write_gnuplot(summary, gnuplot_out)
    return rows


def _std(data: list[float]) -> float:
    return statistics.stdev(data) if len(data) > 1 else 0.0


def write_csv(rows: list[dict], out, timing: bool = False) -> None:
    columns = COLUMNS + (["wall_ms"] if timing else [])
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_csv(rows, fh, timing)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])


def _cell(val) -> str:
    if isinstance(val, float):
        return _fmt(val)
    return "" if val is None else str(val)


def write_gnuplot(summary: list[dict], path: str | Path) -> None:
    """Whitespace-separated mean/std table, one block per (instance, algorithm)."""
    means = [r for r in summary if r["kind"] == "mean"]
    stds = {(r["instance"], r["algorithm"], r["epsilon"]): r for r in summary if r["kind"] == "std"}
    lines = ["# epsilon n mean_error std_error mean_probes std_probes"]
    current = None
    for r in means:
        block = (r["instance"], r["algorithm"])
        if block != current:
            if current is not None:
                lines += ["", ""]
            lines.append(f"# {r['instance']} {r['algorithm']}")
            current = block
        s = stds[(r["instance"], r["algorithm"], r["epsilon"])]
        vals = [r["epsilon"], r["n"], r["error"], s["error"], r["probes"], s["probes"]]
        lines.append(" ".join("nan" if v is None else (_fmt(v) if isinstance(v, float) else str(v)) for v in vals))
    Path(path).write_text("\n".join(lines) + "\n")


def mean_and_sem(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and its standard error."""
    m = statistics.fmean(values)
    if len(values) < 2:
        return m, 0.0
    return m, statistics.stdev(values) / math.sqrt(len(values))
