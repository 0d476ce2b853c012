"""Instance and assignment data model plus exact objective evaluation.

Two instance kinds are supported:

* :class:`DenseGraph` -- an adjacency-matrix graph, the Max-Cut input.
* :class:`CspInstance` -- an arity-``r`` constraint system over an alphabet of
  size ``k`` with 0/1 payoff tables keyed by sorted variable tuples.

Both count *probes*: every algorithmic query of an edge or a constraint table
bumps a counter. Exact evaluation (:func:`evaluate_cut`, :func:`evaluate_csp`)
is an offline audit and never touches those counters.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

UNASSIGNED = -1


class DenseCspError(ValueError):
    """Base class for invalid inputs and refused computations."""


class IncompleteAssignmentError(DenseCspError):
    pass


class BudgetExceededError(DenseCspError):
    """An exhaustive enumeration would exceed its configured budget."""


class _ProbeCounter:
    # Incremented from branch workers concurrently, so guarded by a lock.
    __slots__ = ("_value", "_lock")

    def __init__(self) -> None:
        self._value = 0
        self._lock = threading.Lock()

    def add(self, amount: int) -> None:
        with self._lock:
            self._value += amount

    @property
    def value(self) -> int:
        return self._value


class DenseGraph:
    """Simple undirected graph stored as a symmetric boolean matrix."""

    def __init__(self, adjacency: np.ndarray):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DenseCspError("adjacency must be a square matrix")
        if adj.diagonal().any():
            raise DenseCspError("adjacency must have an empty diagonal")
        if not np.array_equal(adj, adj.T):
            raise DenseCspError("adjacency must be symmetric")
        adj.setflags(write=False)
        self._adj = adj
        self._probes = _ProbeCounter()

    @classmethod
    def _trusted(cls, adjacency: np.ndarray) -> "DenseGraph":
        # Skips the O(n^2) validation; callers guarantee symmetry and empty diagonal.
        self = cls.__new__(cls)
        adjacency.setflags(write=False)
        self._adj = adjacency
        self._probes = _ProbeCounter()
        return self

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DenseGraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise DenseCspError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DenseCspError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u, v] = adj[v, u] = True
        return cls._trusted(adj)

    @classmethod
    def complete(cls, n: int) -> "DenseGraph":
        adj = ~np.eye(n, dtype=bool)
        return cls._trusted(adj)

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "DenseGraph":
        n = a + b
        adj = np.zeros((n, n), dtype=bool)
        adj[:a, a:] = True
        adj[a:, :a] = True
        return cls._trusted(adj)

    @classmethod
    def cycle(cls, n: int) -> "DenseGraph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def fresh_view(self) -> "DenseGraph":
        """Same graph with its own probe counter (shares the matrix)."""
        return DenseGraph._trusted(self._adj)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only view of the matrix. Reading it is not a probe."""
        return self._adj

    @property
    def probe_counter(self) -> int:
        return self._probes.value

    def has_edge(self, u: int, v: int) -> bool:
        """Query one vertex pair; counts as one probe."""
        self._probes.add(1)
        return bool(self._adj[u, v])

    def probe_many(self, v: int, others: np.ndarray) -> np.ndarray:
        """Query the pairs ``(v, u)`` for every ``u`` in ``others``.

        Equivalent to calling :meth:`has_edge` once per pair.
        """
        others = np.asarray(others, dtype=np.intp)
        self._probes.add(int(others.size))
        return self._adj[v, others]

    def edge_count(self) -> int:
        return int(np.count_nonzero(self._adj)) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj, k=1))
        for u, v in zip(us.tolist(), vs.tolist()):
            yield u, v

    def relabel(self, perm: Sequence[int]) -> "DenseGraph":
        """Graph with vertex ``u`` renamed to ``perm[u]``."""
        perm = np.asarray(perm, dtype=np.intp)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        return DenseGraph._trusted(self._adj[np.ix_(inv, inv)].copy())

    def __repr__(self) -> str:
        return f"DenseGraph(n={self.n}, m={self.edge_count()})"


class CspInstance:
    """An ``n``-variable, ``k``-ary constraint system of uniform arity ``r``.

    ``constraints`` maps a strictly increasing ``r``-tuple of variables to a
    payoff table of ``k**r`` bits; the table entry for value tuple
    ``(a_1, ..., a_r)`` (in key order) sits at row-major index
    ``sum(a_j * k**(r-1-j))``.
    """

    def __init__(
        self,
        n: int,
        k: int,
        r: int,
        constraints: Mapping[tuple[int, ...], Sequence[int]],
    ):
        if k < 2:
            raise DenseCspError("alphabet size k must be at least 2")
        if r < 2:
            raise DenseCspError("arity r must be at least 2")
        self.n = n
        self.k = k
        self.r = r
        size = k**r
        table: dict[tuple[int, ...], np.ndarray] = {}
        for key, payoff in constraints.items():
            key = tuple(int(x) for x in key)
            if len(key) != r:
                raise DenseCspError(f"constraint {key} does not have arity {r}")
            if any(b <= a for a, b in zip(key, key[1:])):
                raise DenseCspError(f"constraint key {key} is not strictly increasing")
            if key[0] < 0 or key[-1] >= n:
                raise DenseCspError(f"constraint key {key} out of range for n={n}")
            arr = np.asarray(payoff, dtype=np.int8).reshape(-1)
            if arr.size != size:
                raise DenseCspError(f"payoff table for {key} needs {size} entries, got {arr.size}")
            if not np.isin(arr, (0, 1)).all():
                raise DenseCspError(f"payoff table for {key} has entries outside {{0,1}}")
            arr.setflags(write=False)
            table[key] = arr
        self._constraints = table
        self.constraints = MappingProxyType(table)
        self._probes = _ProbeCounter()
        self._packed: tuple[np.ndarray, np.ndarray] | None = None
        # row-major weights for value tuples
        self.powers = k ** np.arange(r - 1, -1, -1, dtype=np.int64)

    @property
    def probe_counter(self) -> int:
        return self._probes.value

    def fresh_view(self) -> "CspInstance":
        """Same instance with its own probe counter (shares the tables)."""
        other = CspInstance.__new__(CspInstance)
        other.__dict__.update(self.__dict__)
        other._probes = _ProbeCounter()
        return other

    def lookup(self, key: tuple[int, ...]) -> np.ndarray | None:
        """Algorithmic constraint query: returns the payoff table or ``None``.

        Every call counts as one probe, hit or miss.
        """
        self._probes.add(1)
        return self._constraints.get(key)

    def get(self, key: tuple[int, ...]) -> np.ndarray | None:
        """Same as :meth:`lookup` without probe accounting (audits only)."""
        return self._constraints.get(key)

    def payoff(self, key: tuple[int, ...], values: Sequence[int]) -> int:
        table = self._constraints.get(key)
        if table is None:
            return 0
        return int(table[int(np.dot(values, self.powers))])

    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        """``(keys, tables)`` arrays of shape ``(m, r)`` and ``(m, k**r)``."""
        if self._packed is None:
            m = len(self._constraints)
            keys = np.array(list(self._constraints), dtype=np.intp).reshape(m, self.r)
            tables = np.array(list(self._constraints.values()), dtype=np.int8).reshape(m, self.k**self.r)
            self._packed = (keys, tables)
        return self._packed

    def __len__(self) -> int:
        return len(self._constraints)

    def relabel(self, perm: Sequence[int]) -> "CspInstance":
        """Instance with variable ``u`` renamed to ``perm[u]``.

        Payoff tables are re-indexed so the constraint keeps its meaning.
        """
        perm = [int(p) for p in perm]
        shape = (self.k,) * self.r
        out = {}
        for key, table in self._constraints.items():
            new_vars = [perm[u] for u in key]
            axes = sorted(range(self.r), key=lambda j: new_vars[j])
            t = np.asarray(table).reshape(shape).transpose(axes).reshape(-1)
            out[tuple(new_vars[j] for j in axes)] = t
        return CspInstance(self.n, self.k, self.r, out)

    def __repr__(self) -> str:
        return f"CspInstance(n={self.n}, k={self.k}, r={self.r}, m={len(self)})"


@dataclass
class Assignment:
    """One value per variable; ``UNASSIGNED`` (-1) marks a free variable."""

    n: int
    k: int
    values: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.values is None:
            self.values = np.full(self.n, UNASSIGNED, dtype=np.int64)
        else:
            self.values = np.array(self.values, dtype=np.int64).reshape(-1)
            if self.values.size != self.n:
                raise DenseCspError(f"expected {self.n} values, got {self.values.size}")
            bad = (self.values != UNASSIGNED) & ((self.values < 0) | (self.values >= self.k))
            if bad.any():
                raise DenseCspError("invalid assignment: value outside [0, k)")

    @classmethod
    def from_values(cls, values: Sequence[int], k: int = 2) -> "Assignment":
        return cls(len(values), k, np.asarray(values))

    def __getitem__(self, u: int) -> int:
        return int(self.values[u])

    def __setitem__(self, u: int, value: int) -> None:
        if not 0 <= value < self.k:
            raise DenseCspError(f"invalid assignment: value {value} outside [0, {self.k})")
        self.values[u] = value

    def is_total(self) -> bool:
        return not (self.values == UNASSIGNED).any()

    def unassigned_count(self) -> int:
        return int(np.count_nonzero(self.values == UNASSIGNED))

    def copy(self) -> "Assignment":
        return Assignment(self.n, self.k, self.values.copy())

    def tolist(self) -> list[int]:
        return self.values.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return self.n == other.n and self.k == other.k and np.array_equal(self.values, other.values)


def evaluate_cut(graph: DenseGraph, assignment: Assignment) -> int:
    """Number of edges whose endpoints get different sides."""
    if assignment.k != 2:
        raise DenseCspError("not a bipartition")
    if assignment.n != graph.n:
        raise DenseCspError("assignment size does not match the graph")
    if not assignment.is_total():
        raise IncompleteAssignmentError("incomplete assignment")
    side1 = assignment.values == 1
    return int(np.count_nonzero(graph.adjacency[side1][:, ~side1]))


def evaluate_csp(instance: CspInstance, assignment: Assignment) -> int:
    """Number of stored constraints satisfied by a total assignment."""
    if assignment.n != instance.n:
        raise DenseCspError("assignment size does not match the instance")
    if not assignment.is_total():
        raise IncompleteAssignmentError("incomplete assignment")
    if assignment.k != instance.k:
        raise DenseCspError("assignment alphabet does not match the instance")
    if len(instance) == 0:
        return 0
    keys, tables = instance.packed()
    idx = assignment.values[keys] @ instance.powers
    return int(tables[np.arange(len(keys)), idx].sum())


CUT_TABLE = (0, 1, 1, 0)


def encode_maxcut_as_csp(graph: DenseGraph) -> CspInstance:
    """2-CSP over {0,1} with one 'endpoints differ' constraint per edge."""
    return CspInstance(graph.n, 2, 2, {e: CUT_TABLE for e in graph.edges()})


# -- file formats -----------------------------------------------------------


def _content_lines(path: Path) -> Iterator[list[str]]:
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                yield line.split()


def write_graph(graph: DenseGraph, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"graph {graph.n}\n")
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")


def read_graph(path: str | Path) -> DenseGraph:
    lines = _content_lines(Path(path))
    header = next(lines, None)
    if not header or header[0] != "graph" or len(header) != 2:
        raise DenseCspError(f"{path}: expected header 'graph <n>'")
    n = int(header[1])
    edges = []
    for parts in lines:
        if len(parts) != 2:
            raise DenseCspError(f"{path}: malformed edge line {' '.join(parts)!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise DenseCspError(f"{path}: edge ({u}, {v}) must satisfy u < v")
        edges.append((u, v))
    return DenseGraph.from_edges(n, edges)


def write_csp(instance: CspInstance, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"csp {instance.n} {instance.k} {instance.r}\n")
        for key, table in instance.constraints.items():
            fh.write(" ".join(map(str, key)) + " " + " ".join(map(str, table.tolist())) + "\n")


def read_csp(path: str | Path) -> CspInstance:
    lines = _content_lines(Path(path))
    header = next(lines, None)
    if not header or header[0] != "csp" or len(header) != 4:
        raise DenseCspError(f"{path}: expected header 'csp <n> <k> <r>'")
    n, k, r = (int(x) for x in header[1:])
    width = r + k**r
    constraints = {}
    for parts in lines:
        if len(parts) != width:
            raise DenseCspError(f"{path}: constraint line needs {width} fields, got {len(parts)}")
        nums = [int(x) for x in parts]
        key = tuple(nums[:r])
        if key in constraints:
            raise DenseCspError(f"{path}: duplicate constraint {key}")
        constraints[key] = nums[r:]
    return CspInstance(n, k, r, constraints)


def read_instance(path: str | Path) -> DenseGraph | CspInstance:
    """Load either file kind, dispatching on the header keyword."""
    first = next(_content_lines(Path(path)), None)
    if first and first[0] == "graph":
        return read_graph(path)
    if first and first[0] == "csp":
        return read_csp(path)
    raise DenseCspError(f"{path}: unrecognised instance header")


def all_value_tuples(k: int, r: int) -> Iterator[tuple[int, ...]]:
    """Value tuples in payoff-table (row-major) order."""
    return itertools.product(range(k), repeat=r)
