"""Exhaustive solvers and the exact-degree greedy reference.

Everything here reads instances directly (no probe accounting) and refuses
to run past its budget rather than returning an approximate answer.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .core import (
    UNASSIGNED,
    Assignment,
    BudgetExceededError,
    CspInstance,
    DenseCspError,
    DenseGraph,
    evaluate_csp,
    evaluate_cut,
)

DEFAULT_BUDGET = 26
_CHUNK = 1 << 15


def _check_budget(bits: float, budget: float) -> None:
    if bits > budget:
        raise BudgetExceededError(
            f"instance too large for oracle: 2^{bits:.1f} assignments exceed budget 2^{budget}"
        )


def brute_force_maxcut(graph: DenseGraph, budget: float = DEFAULT_BUDGET) -> tuple[Assignment, int]:
    """Maximum cut by enumerating all 2^(n-1) bipartitions with vertex 0 on side 0.

    Ties go to the lexicographically first bipartition in enumeration order.
    """
    n = graph.n
    _check_budget(n, budget)
    if n <= 1:
        return Assignment(n, 2, np.zeros(n, dtype=np.int64)), 0
    adj = graph.adjacency.astype(np.int32)
    deg = adj.sum(axis=1)
    shifts = np.arange(n - 1, dtype=np.int64)
    total = 1 << (n - 1)
    best_val, best_code = -1, 0
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        x = np.zeros((codes.size, n), dtype=np.int32)
        x[:, 1:] = (codes[:, None] >> shifts) & 1
        # cut(x) = sum_u x_u deg_u - x^T A x for 0/1 side vectors
        cut = x @ deg - np.einsum("ij,ij->i", x @ adj, x)
        i = int(np.argmax(cut))
        if cut[i] > best_val:
            best_val, best_code = int(cut[i]), int(codes[i])
    values = np.zeros(n, dtype=np.int64)
    values[1:] = (best_code >> shifts) & 1
    return Assignment(n, 2, values), best_val


def brute_force_csp(instance: CspInstance, budget: float = DEFAULT_BUDGET) -> tuple[Assignment, int]:
    """Best of all k^n total assignments (first maximiser in base-k order)."""
    n, k = instance.n, instance.k
    _check_budget(n * math.log2(k), budget)
    keys, tables = instance.packed() if len(instance) else (np.empty((0, instance.r), np.intp), None)
    place = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    total = k**n
    best_val, best_code = -1, 0
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        x = (codes[:, None] // place) % k
        score = np.zeros(codes.size, dtype=np.int64)
        for j in range(len(keys)):
            score += tables[j][x[:, keys[j]] @ instance.powers]
        i = int(np.argmax(score))
        if score[i] > best_val:
            best_val, best_code = int(score[i]), int(codes[i])
    values = (best_code // place) % k
    return Assignment(n, k, values), best_val


def exact_greedy_reference(
    problem: DenseGraph | CspInstance,
    seed: Assignment,
    order: Sequence[int],
) -> tuple[Assignment, int]:
    """Greedy placement with exact counts over everything placed so far.

    ``seed`` fixes the starting variables; ``order`` lists the rest. Each
    variable takes the value that satisfies the most constraints whose other
    variables are already placed (for graphs: the side opposite the majority
    of placed neighbours). Ties go to the smallest value.
    """
    a = seed.copy()
    placed = [u for u in range(a.n) if a.values[u] != UNASSIGNED]
    if isinstance(problem, DenseGraph):
        adj = problem.adjacency
        for v in order:
            v = int(v)
            if a.values[v] != UNASSIGNED:
                raise DenseCspError(f"vertex {v} is already placed")
            counts = [0, 0]
            for u in placed:
                if adj[v, u]:
                    counts[a.values[u]] += 1
            a.values[v] = 1 if counts[1] < counts[0] else 0
            placed.append(v)
        return a, evaluate_cut(problem, a)

    k, r = problem.k, problem.r
    for v in order:
        v = int(v)
        if a.values[v] != UNASSIGNED:
            raise DenseCspError(f"variable {v} is already placed")
        score = [0] * k
        for tail in itertools.permutations(placed, r - 1):
            key = tuple(sorted((v, *tail)))
            if problem.get(key) is None:
                continue
            for i in range(k):
                a.values[v] = i
                score[i] += problem.payoff(key, [int(a.values[u]) for u in key])
        a.values[v] = max(range(k), key=lambda i: (score[i], -i))
        placed.append(v)
    return a, evaluate_csp(problem, a)
