"""Two-level bootstrapped greedy for k-ary r-CSPs.

Phase 1 draws a secondary sample ``S1`` and a primary sample ``S0`` inside it,
enumerates all ``k^|S0|`` assignments of ``S0`` and extends each greedily over
``S1``. The best extension (scored exactly on the constraints inside ``S1``)
is then frozen, and phase 2 places every remaining variable greedily.

A greedy step for variable ``v`` samples *critical tuples*: ordered tuples of
``r - 1`` distinct already-placed variables. Together with ``v`` each names at
most one stored constraint, whose outcome now depends on ``v`` alone. ``v``
takes the value satisfying the most sampled constraints.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import SolverConfig
from .core import Assignment, CspInstance, DenseCspError, evaluate_csp
from .maxcut import GreedyState
from .oracle import brute_force_csp
from .report import RunReport
from .sampling import (
    STREAM_BRANCH,
    STREAM_PHASE2,
    STREAM_SETUP,
    LazyGenerator,
    SampleSchedule,
    SeedParams,
    random_permutation,
    sample_without_replacement,
    substream,
)


@dataclass(frozen=True)
class CriticalTuple:
    head: int
    tail: tuple[int, ...]


def count_critical_tuples(placed_count: int, r: int) -> int:
    """Ordered tuples of ``r - 1`` distinct variables out of ``placed_count``."""
    if r < 2:
        raise DenseCspError("arity r must be at least 2")
    if placed_count < r - 1:
        return 0
    return math.perm(placed_count, r - 1)


def decode_tail(rank: int, placed_count: int, width: int) -> tuple[int, ...]:
    """Positions of the ``rank``-th ordered ``width``-tuple of distinct positions.

    Ranks follow mixed radix ``(p, p-1, ..., p-width+1)``: digit ``j`` selects
    among the positions not yet used by digits ``0..j-1``.
    """
    out: list[int] = []
    for j in range(width):
        base = math.perm(placed_count - 1 - j, width - 1 - j)
        digit, rank = divmod(rank, base)
        for used in sorted(out):
            if used <= digit:
                digit += 1
        out.append(digit)
    return tuple(out)


def sample_critical_tuples(
    state: GreedyState,
    v: int,
    s: int,
    rng: np.random.Generator,
    r: int,
    prefix: int | None = None,
) -> list[CriticalTuple]:
    """Up to ``s`` distinct critical tuples for ``v``, uniform without replacement.

    Tails are drawn from the first ``prefix`` placed variables (default: all).
    """
    p = state.size if prefix is None else prefix
    count = count_critical_tuples(p, r)
    if count == 0:
        return []
    if s >= count:
        ranks = range(count)
    else:
        ranks = sample_without_replacement(count, s, rng).tolist()
    placed = state.placed
    if r == 2:
        return [CriticalTuple(v, (int(placed[i]),)) for i in ranks]
    return [
        CriticalTuple(v, tuple(int(placed[i]) for i in decode_tail(rank, p, r - 1)))
        for rank in ranks
    ]


def greedy_place_variable(
    instance: CspInstance,
    state: GreedyState,
    v: int,
    s: int,
    rng: np.random.Generator,
    prefix: int | None = None,
    trace: list | None = None,
) -> int:
    """Value for ``v`` maximising satisfied sampled critical constraints.

    Each sampled tuple costs one constraint lookup. Ties go to the smallest
    value; an empty sample yields 0.
    """
    k = instance.k
    powers = instance.powers
    values = state.assignment.values
    score = np.zeros(k, dtype=np.int64)
    candidates = np.arange(k)
    for ct in sample_critical_tuples(state, v, s, rng, instance.r, prefix):
        if trace is not None:
            trace.append(ct)
        key = tuple(sorted((v, *ct.tail)))
        table = instance.lookup(key)
        if table is None:
            continue
        base = 0
        for j, u in enumerate(key):
            if u == v:
                stride = powers[j]
            else:
                base += values[u] * powers[j]
        score += table[base + stride * candidates]
    return int(np.argmax(score))


# -- the full solver ---------------------------------------------------------


@dataclass
class _Plan:
    params: SeedParams
    schedule: SampleSchedule
    seed_vars: np.ndarray  # S0
    phase1_order: np.ndarray  # S1 \ S0 in placement order
    phase2_order: np.ndarray  # V \ S1 in placement order


@dataclass
class Phase1Result:
    placed: np.ndarray  # S1 in placement order
    assignment: Assignment  # best branch, assigned exactly on S1
    best_branch: int
    branch_count: int
    probes: int
    audit_probes: int


def _schedule(instance: CspInstance, epsilon: float, config: SolverConfig) -> SampleSchedule:
    return SampleSchedule(
        instance.n, epsilon, instance.k, config.delta, config.c_schedule, "rcsp",
        config.k_factor_exponent, full=config.full_sampling,
    )


def make_plan(instance: CspInstance, epsilon: float, config: SolverConfig, seed: int) -> _Plan:
    n = instance.n
    params = SeedParams.for_instance(
        n, epsilon, instance.k, config.c1, config.max_seed_exponent, config.t0
    )
    setup = substream(seed, STREAM_SETUP)
    s1 = sample_without_replacement(n, params.t1, setup)
    s1 = s1[random_permutation(s1.size, setup)]
    # S0 is the first t0 entries of a uniformly shuffled S1; the rest is the phase-1 order.
    s0, order1 = s1[: params.t0], s1[params.t0 :]
    rest = np.setdiff1d(np.arange(n), s1)
    order2 = rest[random_permutation(rest.size, setup)]
    return _Plan(params, _schedule(instance, epsilon, config), s0, order1, order2)


def branch_values(code: int, size: int, k: int) -> np.ndarray:
    """Seed assignment number ``code``: digit j (base k) is the value of element j."""
    return (code // k ** np.arange(size, dtype=np.int64)) % k


def run_phase1(
    instance: CspInstance, plan: _Plan, config: SolverConfig, seed: int, workers: int = 1
) -> Phase1Result:
    k = instance.k
    t0 = plan.seed_vars.size
    placed = np.concatenate([plan.seed_vars, plan.phase1_order])
    before = instance.probe_counter

    def branch(code: int) -> Assignment:
        rng = LazyGenerator(seed, STREAM_BRANCH, code)
        state = GreedyState.seeded(instance.n, plan.seed_vars, branch_values(code, t0, k), k)
        for v in plan.phase1_order:
            t = state.size + 1
            state.place(int(v), greedy_place_variable(instance, state, int(v), plan.schedule.size(t), rng))
        return state.assignment

    codes = range(k**t0)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(branch, codes))
    else:
        results = [branch(c) for c in codes]
    probes = instance.probe_counter - before

    # Score every branch exactly on the constraints that lie inside S1.
    inside = []
    combos = 0
    for key in itertools.combinations(sorted(placed.tolist()), instance.r):
        combos += 1
        table = instance.get(key)
        if table is not None:
            inside.append((key, table))
    if inside:
        keys = np.array([key for key, _ in inside], dtype=np.intp)
        tables = np.array([t for _, t in inside])
        rows = np.arange(len(inside))
        scores = [int(tables[rows, a.values[keys] @ instance.powers].sum()) for a in results]
    else:
        scores = [0] * len(results)
    best = int(np.argmax(scores))
    return Phase1Result(placed, results[best], best, len(results), probes, combos)


def solve_rcsp(
    instance: CspInstance,
    epsilon: float,
    config: SolverConfig | None = None,
    seed: int = 0,
) -> RunReport:
    config = config or SolverConfig()
    start = time.perf_counter()
    plan_or_report = _prepare(instance, epsilon, config, seed, "rcsp", start)
    if isinstance(plan_or_report, RunReport):
        return plan_or_report
    plan = plan_or_report
    phase1 = run_phase1(instance, plan, config, seed, config.threads)

    state = GreedyState.seeded(
        instance.n, phase1.placed, phase1.assignment.values[phase1.placed], instance.k
    )
    before = instance.probe_counter
    for v in plan.phase2_order:
        t = state.size + 1
        rng = LazyGenerator(seed, STREAM_PHASE2, t)
        state.place(int(v), greedy_place_variable(instance, state, int(v), plan.schedule.size(t), rng))
    phase2_probes = instance.probe_counter - before
    return _finish(
        "rcsp", instance, epsilon, config, seed, start, plan, phase1, state.assignment, phase2_probes
    )


def _echo(instance: CspInstance, epsilon: float, config: SolverConfig, seed: int) -> dict:
    return {
        "n": instance.n, "k": instance.k, "r": instance.r, "epsilon": epsilon,
        "delta": config.delta, "c_schedule": config.c_schedule, "c1": config.c1,
        "k_factor_exponent": config.k_factor_exponent, "seed": seed,
    }


def _prepare(instance, epsilon, config, seed, algorithm, start) -> _Plan | RunReport:
    """Plan the run, or short-circuit to the exact optimum when S0 covers everything."""
    plan = make_plan(instance, epsilon, config, seed)
    if plan.params.t0 >= instance.n:
        best, value = brute_force_csp(instance, config.oracle_budget)
        return RunReport(
            algorithm, value, best, probes=0, audit_probes=len(instance),
            wall_ms=_ms(start), params=_echo(instance, epsilon, config, seed),
            branches=0, t0=plan.params.t0, t1=plan.params.t1, fallback=True,
            phase1_probes=0, phase2_probes=0, branch_count=0,
            fallback_phase2_skipped=True,
        )
    plan.params.check_budget(instance.k)
    return plan


def _finish(algorithm, instance, epsilon, config, seed, start, plan, phase1, assignment,
            phase2_probes, **extra) -> RunReport:
    value = evaluate_csp(instance, assignment)
    return RunReport(
        algorithm, value, assignment,
        probes=phase1.probes + phase2_probes,
        audit_probes=phase1.audit_probes + len(instance),
        wall_ms=_ms(start), params=_echo(instance, epsilon, config, seed),
        branches=phase1.branch_count, t0=plan.params.t0, t1=plan.params.t1,
        fallback=False, best_branch=phase1.best_branch,
        phase1_probes=phase1.probes, phase2_probes=phase2_probes,
        branch_count=phase1.branch_count,
        fallback_phase2_skipped=plan.phase2_order.size == 0,
        **extra,
    )


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)
