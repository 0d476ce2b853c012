"""Independent reference computations used to freeze expected values.

Everything here is deliberately naive pure Python so that it shares no code
path with the package under test.
"""

from __future__ import annotations

import itertools
import math


def naive_cut(adjacency, values) -> int:
    n = len(values)
    total = 0
    for u in range(n):
        for v in range(u + 1, n):
            if adjacency[u][v] and values[u] != values[v]:
                total += 1
    return total


def naive_csp_value(instance, values) -> int:
    total = 0
    for key, table in instance.constraints.items():
        index = 0
        for u in key:
            index = index * instance.k + int(values[u])
        total += int(table[index])
    return total


def enumerate_maxcut(adjacency) -> int:
    n = len(adjacency)
    return max(naive_cut(adjacency, bits) for bits in itertools.product((0, 1), repeat=n))


def enumerate_csp(instance) -> int:
    return max(
        naive_csp_value(instance, vals)
        for vals in itertools.product(range(instance.k), repeat=instance.n)
    )


def enumerate_correlation_clustering(n: int, labels: dict, k: int) -> int:
    """Agreements of the best clustering, straight from the signed pairs."""
    best = 0
    for lab in itertools.product(range(k), repeat=n):
        agree = 0
        for (u, v), sign in labels.items():
            same = lab[u] == lab[v]
            agree += same if sign > 0 else not same
        best = max(best, agree)
    return best


def schedule_size(n: int, t: int, eps: float, k_factor: float = 1.0, c: float = 1.0,
                  delta: float = 2 / 3) -> int:
    return max(1, math.ceil(c * (n / t) ** delta * k_factor / eps**2 - 1e-9))


def boundaries(start: int, n: int, growth: float) -> list[int]:
    out = [start]
    while out[-1] < n:
        out.append(min(n, max(out[-1] + 1, math.ceil((1 + growth) * out[-1] - 1e-9))))
    return out
