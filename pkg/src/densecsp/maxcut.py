"""Subsampled greedy Max-Cut with exhaustive seed-partition enumeration.

A random seed set of ``t0 = ceil(1/eps^2)`` vertices is fixed, and for every
one of its ``2^t0`` bipartitions the remaining vertices are placed greedily in
a random order. The ``t``-th placement looks at only ``s_t`` of the already
placed vertices, sampled without replacement, so one pass costs
``O(n / eps^2)`` edge probes instead of ``O(n^2)``. The best of the branch cuts
(evaluated exactly) is returned.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import SolverConfig
from .core import UNASSIGNED, Assignment, DenseCspError, DenseGraph, evaluate_cut
from .oracle import brute_force_maxcut
from .report import RunReport
from .sampling import (
    STREAM_BRANCH,
    STREAM_ORDER,
    STREAM_SETUP,
    STREAM_SHARED,
    LazyGenerator,
    SampleSchedule,
    SeedParams,
    random_permutation,
    sample_without_replacement,
    substream,
)


@dataclass
class GreedyState:
    """Vertices placed so far (in placement order) and their sides."""

    assignment: Assignment
    _buf: np.ndarray
    size: int = 0

    @classmethod
    def empty(cls, n: int, k: int = 2) -> "GreedyState":
        return cls(Assignment(n, k), np.empty(n, dtype=np.intp))

    @classmethod
    def seeded(cls, n: int, vertices, values, k: int = 2) -> "GreedyState":
        vertices = np.asarray(vertices, dtype=np.intp)
        values = np.asarray(values, dtype=np.int64)
        if len(set(vertices.tolist())) != vertices.size:
            raise DenseCspError("seed vertices must be distinct")
        if values.size and not ((values >= 0) & (values < k)).all():
            raise DenseCspError("invalid assignment: seed value outside [0, k)")
        state = cls.empty(n, k)
        state.assignment.values[vertices] = values
        state._buf[: vertices.size] = vertices
        state.size = vertices.size
        return state

    @property
    def placed(self) -> np.ndarray:
        return self._buf[: self.size]

    def place(self, v: int, value: int) -> None:
        if self.assignment.values[v] != UNASSIGNED:
            raise DenseCspError(f"variable {v} is already placed")
        self.assignment[v] = value
        self._buf[self.size] = v
        self.size += 1

    def current_value(self, graph: DenseGraph) -> int:
        """Exact number of cut edges inside the placed set (an audit)."""
        sides = self.assignment.values
        placed = self.placed
        ones = placed[sides[placed] == 1]
        zeros = placed[sides[placed] == 0]
        return int(np.count_nonzero(graph.adjacency[np.ix_(ones, zeros)]))


def greedy_place_vertex(
    graph: DenseGraph,
    state: GreedyState,
    v: int,
    s: int,
    rng: np.random.Generator,
) -> int:
    """Choose a side for ``v`` from a sample of at most ``s`` placed vertices.

    Returns the side holding fewer sampled neighbours (ties -> side 0). The
    state is not modified.
    """
    t_prev = state.size
    if t_prev == 0:
        raise DenseCspError("empty sample domain")
    if s >= t_prev:
        sample = state.placed
    else:
        sample = state.placed[sample_without_replacement(t_prev, s, rng)]
    adjacent = graph.probe_many(v, sample)
    on_one = int(np.count_nonzero(state.assignment.values[sample[adjacent]]))
    on_zero = int(np.count_nonzero(adjacent)) - on_one
    return 1 if on_one < on_zero else 0


def run_seed_branch(
    graph: DenseGraph,
    seed_vertices,
    seed_partition,
    order,
    schedule: SampleSchedule,
    rng: np.random.Generator,
) -> tuple[Assignment, int]:
    """Greedy pass from one seed bipartition; returns the cut and its exact value."""
    state = GreedyState.seeded(graph.n, seed_vertices, seed_partition)
    if state.size == 0 and len(order):
        # Nothing to compare against: the first vertex opens side 0.
        state.place(int(order[0]), 0)
        order = order[1:]
    for v in order:
        t = state.size + 1
        side = greedy_place_vertex(graph, state, int(v), schedule.size(t), rng)
        state.place(int(v), side)
    return state.assignment, evaluate_cut(graph, state.assignment)


def partition_bits(code: int, size: int) -> np.ndarray:
    """Bipartition number ``code`` of a ``size``-element seed set (bit j -> element j)."""
    return (code >> np.arange(size, dtype=np.int64)) & 1


def solve_maxcut(
    graph: DenseGraph,
    epsilon: float,
    config: SolverConfig | None = None,
    seed: int = 0,
) -> RunReport:
    config = config or SolverConfig()
    start = time.perf_counter()
    n = graph.n
    params = SeedParams.for_instance(n, epsilon, 2, config.c1, config.max_seed_exponent, config.t0)
    echo = {
        "n": n, "k": 2, "r": 2, "epsilon": epsilon, "delta": config.delta,
        "c_schedule": config.c_schedule, "c1": config.c1, "seed": seed,
    }
    probes_before = graph.probe_counter

    if params.t0 >= n:
        best, value = brute_force_maxcut(graph, config.oracle_budget)
        return RunReport(
            "maxcut", value, best, probes=0, audit_probes=n * (n - 1) // 2,
            wall_ms=_ms(start), params=echo, branches=0, t0=params.t0, fallback=True,
        )
    if config.fixed_branch is None:
        params.check_budget(2)

    schedule = SampleSchedule(
        n, epsilon, 2, config.delta, config.c_schedule, "maxcut", full=config.full_sampling
    )
    setup = substream(seed, STREAM_SETUP)
    seed_vertices = sample_without_replacement(n, params.t0, setup)
    rest = np.setdiff1d(np.arange(n), seed_vertices)
    shared_order = rest[random_permutation(rest.size, setup)]

    def branch(code: int) -> tuple[Assignment, int]:
        order = shared_order
        if config.independent_orders:
            order = rest[random_permutation(rest.size, substream(seed, STREAM_ORDER, code))]
        if config.shared_samples:
            rng = LazyGenerator(seed, STREAM_SHARED)
        else:
            rng = LazyGenerator(seed, STREAM_BRANCH, code)
        return run_seed_branch(graph, seed_vertices, partition_bits(code, params.t0), order, schedule, rng)

    codes = [config.fixed_branch] if config.fixed_branch is not None else range(1 << params.t0)
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            results = list(pool.map(branch, codes))
    else:
        results = [branch(c) for c in codes]

    values = [v for _, v in results]
    best_i = int(np.argmax(values))
    best, value = results[best_i]
    return RunReport(
        "maxcut", value, best,
        probes=graph.probe_counter - probes_before,
        audit_probes=len(results) * (n * (n - 1) // 2),
        wall_ms=_ms(start), params=echo, branches=len(results), t0=params.t0,
        fallback=False, best_branch=int(list(codes)[best_i]),
    )


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)
