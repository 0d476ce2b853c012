"""Superstep parallelisation of the r-CSP greedy pass.

Phase 1 is split across workers by seed branch. Phase 2 runs in supersteps:
the processed set grows from ``b_j`` to ``b_{j+1} = ceil((1 + eps) * b_j)``
variables, and every variable of a superstep is placed independently using
critical tuples drawn only from the first ``b_j`` (already committed)
variables. Each variable's randomness is keyed by its placement rank, so the
output does not depend on the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor

from .config import SolverConfig
from .core import CspInstance, DenseCspError, DenseGraph, encode_maxcut_as_csp
from .maxcut import GreedyState
from .rcsp import _finish, _prepare, greedy_place_variable, run_phase1
from .report import RunReport
from .sampling import STREAM_PHASE2, LazyGenerator


def superstep_boundaries(start: int, n: int, growth: float) -> list[int]:
    """``[b_0, b_1, ...]`` with ``b_0 = start`` growing by ``(1 + growth)`` up to ``n``."""
    if growth <= 0:
        raise DenseCspError("superstep growth must be positive")
    bounds = [start]
    while bounds[-1] < n:
        b = bounds[-1]
        bounds.append(min(n, max(b + 1, math.ceil((1 + growth) * b - 1e-9))))
    return bounds


def solve_rcsp_parallel(
    instance: CspInstance | DenseGraph,
    epsilon: float,
    workers: int = 1,
    config: SolverConfig | None = None,
    seed: int = 0,
) -> RunReport:
    if workers < 1:
        raise DenseCspError("need at least one worker")
    if isinstance(instance, DenseGraph):
        instance = encode_maxcut_as_csp(instance)
    config = config or SolverConfig()
    start = time.perf_counter()
    plan = _prepare(instance, epsilon, config, seed, "rcsp-parallel", start)
    if isinstance(plan, RunReport):
        return plan
    phase1 = run_phase1(instance, plan, config, seed, workers)

    state = GreedyState.seeded(
        instance.n, phase1.placed, phase1.assignment.values[phase1.placed], instance.k
    )
    growth = epsilon if config.superstep_growth is None else config.superstep_growth
    t1 = phase1.placed.size
    bounds = superstep_boundaries(t1, instance.n, growth)
    before = instance.probe_counter
    for lo, hi in zip(bounds, bounds[1:]):

        def place(t: int, lo: int = lo) -> int:
            v = int(plan.phase2_order[t - t1 - 1])
            rng = LazyGenerator(seed, STREAM_PHASE2, t)
            trace = [] if config.debug_trace else None
            value = greedy_place_variable(
                instance, state, v, plan.schedule.size(t), rng, prefix=lo, trace=trace
            )
            if trace:
                frozen = set(state.placed[:lo].tolist())
                for ct in trace:
                    assert frozen.issuperset(ct.tail), f"rank {t} read outside the frozen prefix"
            return value

        ranks = range(lo + 1, hi + 1)
        if workers > 1 and len(ranks) > 1:
            with ThreadPoolExecutor(workers) as pool:
                values = list(pool.map(place, ranks))
        else:
            values = [place(t) for t in ranks]
        for t, value in zip(ranks, values):
            state.place(int(plan.phase2_order[t - t1 - 1]), value)
    phase2_probes = instance.probe_counter - before

    sizes = [b - a for a, b in zip(bounds, bounds[1:])]
    return _finish(
        "rcsp-parallel", instance, epsilon, config, seed, start, plan, phase1,
        state.assignment, phase2_probes, supersteps=len(sizes), superstep_sizes=sizes,
    )
