"""Seeded instance generators.

``rng`` arguments accept a ``numpy.random.Generator`` or an integer seed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import Assignment, CspInstance, DenseCspError, DenseGraph, evaluate_cut
from .sampling import as_generator

_ROW_BLOCK = 256

PREDICATES = ("parity", "random-table", "cut-generalization")


def gen_gnp(n: int, p: float, rng=None) -> DenseGraph:
    """Erdos-Renyi G(n, p): every pair is an edge independently with probability p."""
    if not 0 <= p <= 1:
        raise DenseCspError("edge probability must lie in [0, 1]")
    rng = as_generator(rng)
    adj = np.zeros((n, n), dtype=bool)
    # Row blocks keep the float scratch small for large n.
    for lo in range(0, n, _ROW_BLOCK):
        hi = min(n, lo + _ROW_BLOCK)
        adj[lo:hi] = rng.random((hi - lo, n)) < p
    adj = np.triu(adj, k=1)
    adj |= adj.T
    return DenseGraph._trusted(adj)


@dataclass
class PlantedInstance:
    """Complete bipartite core ``V0 x V1`` plus biased attachments from ``V2``.

    ``planted_sides[i]`` is the side ``r_v`` drawn for ``parts[2][i]``:
    vertex ``v`` is denser towards ``V_{r_v}``.
    """

    graph: DenseGraph
    parts: tuple[np.ndarray, np.ndarray, np.ndarray]
    planted_sides: np.ndarray
    epsilon: float
    dense_p: float

    def planted_assignment(self) -> Assignment:
        """V0 on side 0, V1 on side 1, each v in V2 opposite its dense side."""
        values = np.empty(self.graph.n, dtype=np.int64)
        v0, v1, v2 = self.parts
        values[v0] = 0
        values[v1] = 1
        values[v2] = 1 - self.planted_sides
        return Assignment(self.graph.n, 2, values)

    def planted_value(self) -> int:
        return evaluate_cut(self.graph, self.planted_assignment())

    def sidecar(self) -> dict:
        return {
            "parts": [p.tolist() for p in self.parts],
            "planted_sides": self.planted_sides.tolist(),
            "epsilon": self.epsilon,
            "dense_p": self.dense_p,
            "planted_value": self.planted_value(),
        }


def planted_dense_probability(epsilon: float, bias: str = "relative") -> float:
    """Edge probability towards a ``V2`` vertex's dense side.

    ``"relative"`` gives ``(1 + eps) / 2``, which makes the expected optimum
    ``18 n^2/81 + 2 eps n^2/81``; ``"additive"`` gives ``1/2 + eps``.
    """
    if bias == "relative":
        return (1 + epsilon) / 2
    if bias == "additive":
        return 0.5 + epsilon
    raise DenseCspError(f"unknown bias convention {bias!r}")


def gen_planted_hard(n: int, epsilon: float, rng=None, bias: str = "relative") -> PlantedInstance:
    if n % 9:
        raise DenseCspError(f"planted instance size must be divisible by 9, got {n}")
    if not 0 < epsilon < 0.5:
        raise DenseCspError("epsilon must lie in (0, 1/2)")
    rng = as_generator(rng)
    dense_p = planted_dense_probability(epsilon, bias)
    m, m2 = 4 * n // 9, n // 9
    labels = rng.permutation(n)
    v0, v1, v2 = labels[:m], labels[m : 2 * m], labels[2 * m :]
    sides = rng.integers(0, 2, size=m2)

    adj = np.zeros((n, n), dtype=bool)
    adj[np.ix_(v0, v1)] = True
    halves = (v0, v1)
    for i, v in enumerate(v2):
        for side in (0, 1):
            p = dense_p if side == sides[i] else 0.5
            targets = halves[side]
            adj[v, targets] = rng.random(m) < p
    adj |= adj.T
    return PlantedInstance(DenseGraph._trusted(adj), (v0, v1, v2), sides, epsilon, dense_p)


def planted_value_expectation(n: int, epsilon: float, bias: str = "relative") -> tuple[float, float]:
    """Mean and standard deviation of the planted cut value under the generator."""
    m, m2 = 4 * n / 9, n / 9
    p = planted_dense_probability(epsilon, bias)
    mean = m * m + m2 * m * p
    return mean, math.sqrt(m2 * m * p * (1 - p))


def gen_random_rcsp(
    n: int, k: int, r: int, density: float, predicate: str, rng=None
) -> CspInstance:
    """Random instance: each r-subset carries a constraint with probability ``density``.

    Predicates: ``parity`` (k=2; satisfied iff the value sum has a random
    target parity), ``random-table`` (i.i.d. fair payoff bits) and
    ``cut-generalization`` (satisfied iff the values are not all equal).
    """
    if not 0 <= density <= 1:
        raise DenseCspError("density must lie in [0, 1]")
    if n < r:
        raise DenseCspError("need at least r variables")
    if predicate not in PREDICATES:
        raise DenseCspError(f"unknown predicate {predicate!r}")
    if predicate == "parity" and k != 2:
        raise DenseCspError("parity predicate requires k = 2")
    rng = as_generator(rng)
    tuples = np.array(list(itertools.product(range(k), repeat=r)), dtype=np.int64)
    not_all_equal = (tuples != tuples[:, :1]).any(axis=1).astype(np.int8)
    value_sums = tuples.sum(axis=1) % 2
    constraints = {}
    for key in itertools.combinations(range(n), r):
        if rng.random() >= density:
            continue
        if predicate == "parity":
            target = rng.integers(0, 2)
            constraints[key] = (value_sums == target).astype(np.int8)
        elif predicate == "random-table":
            constraints[key] = rng.integers(0, 2, size=k**r, dtype=np.int8)
        else:
            constraints[key] = not_all_equal
    return CspInstance(n, k, r, constraints)


@dataclass
class SignedGraph:
    """Vertex pairs labelled ``+1`` (similar) or ``-1`` (dissimilar)."""

    n: int
    labels: Mapping[tuple[int, int], int]


def _sign(label) -> int:
    if label in ("+", 1, "+1"):
        return 1
    if label in ("-", -1, "-1"):
        return -1
    raise DenseCspError(f"edge label must be '+' or '-', got {label!r}")


def encode_correlation_clustering(signed_graph: SignedGraph, k: int) -> CspInstance:
    """2-CSP whose satisfied constraints are the clustering's agreements.

    A ``+`` pair is satisfied iff both ends share a cluster label, a ``-``
    pair iff they do not.
    """
    if k < 2:
        raise DenseCspError("cluster count k must be at least 2")
    eye = np.eye(k, dtype=np.int8).reshape(-1)
    same, differ = eye, (1 - eye).astype(np.int8)
    constraints = {}
    for (u, v), label in signed_graph.labels.items():
        key = (min(u, v), max(u, v))
        constraints[key] = same if _sign(label) > 0 else differ
    return CspInstance(signed_graph.n, k, 2, constraints)


def gen_signed_graph(n: int, density: float, p_plus: float = 0.5, rng=None) -> SignedGraph:
    """Random signed graph: each pair present w.p. ``density``, positive w.p. ``p_plus``."""
    rng = as_generator(rng)
    labels = {}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < density:
            labels[(u, v)] = 1 if rng.random() < p_plus else -1
    return SignedGraph(n, labels)
