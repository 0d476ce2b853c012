"""Sample-size schedules, uniform samplers and seeded random substreams.

All randomness flows through :func:`substream`, which derives an independent
PCG64 generator from ``(master_seed, *key)`` via numpy's ``SeedSequence``
spawn keys. Work split across threads therefore sees the same draws as a
sequential run, as long as every unit of work is keyed the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BudgetExceededError, DenseCspError

# Spawn-key namespaces; the second key component identifies the unit of work.
STREAM_SETUP = 0
STREAM_BRANCH = 1
STREAM_PHASE2 = 2
STREAM_SHARED = 3
STREAM_ORDER = 4
STREAM_GEN = 5

# Guards ceil() against float noise such as 99.99999999999999 -> 100.
_CEIL_SLACK = 1e-9


def substream(master_seed: int, *key: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(x) for x in key))
    return np.random.Generator(np.random.PCG64(seq))


class LazyGenerator:
    """A :func:`substream` that is only built on first use.

    Most seed branches on small instances never need a random draw, and
    building a generator dominates their cost.
    """

    def __init__(self, master_seed: int, *key: int):
        self._seed = master_seed
        self._key = key
        self._gen: np.random.Generator | None = None

    def __getattr__(self, name: str):
        if name.startswith("_"):
            raise AttributeError(name)
        if self._gen is None:
            self._gen = substream(self._seed, *self._key)
        return getattr(self._gen, name)


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(0 if rng is None else int(rng), STREAM_GEN)


@dataclass(frozen=True)
class SampleSchedule:
    """Per-step sample size ``c * n**delta * k_factor / (t**delta * eps**2)``.

    ``k_factor`` is 1 for the Max-Cut variant and ``k**k_factor_exponent``
    for the r-CSP variant. ``full=True`` disables subsampling altogether
    (every step inspects its whole domain), which turns the solvers into the
    exact-degree greedy.
    """

    n: int
    epsilon: float
    k: int = 2
    delta: float = 2 / 3
    c_schedule: float = 1.0
    variant: str = "maxcut"
    k_factor_exponent: float = 4.0
    full: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise DenseCspError("epsilon must lie in (0, 1)")
        if not 0 < self.delta < 1:
            raise DenseCspError("delta must lie in (0, 1)")
        if self.c_schedule <= 0:
            raise DenseCspError("c_schedule must be positive")
        if self.variant not in ("maxcut", "rcsp"):
            raise DenseCspError(f"unknown schedule variant {self.variant!r}")

    @property
    def k_factor(self) -> float:
        if self.variant == "maxcut":
            return 1.0
        return float(self.k) ** self.k_factor_exponent

    def size(self, t: int) -> int:
        if t < 1:
            raise DenseCspError("step index t must be >= 1")
        if self.full:
            return np.iinfo(np.int64).max
        raw = self.c_schedule * (self.n / t) ** self.delta * self.k_factor / self.epsilon**2
        return max(1, math.ceil(raw - _CEIL_SLACK))

    def total(self, t_start: int, t_end: int) -> int:
        """Sum of ``size(t)`` over ``t_start <= t <= t_end``."""
        return sum(self.size(t) for t in range(t_start, t_end + 1))


def sample_size(schedule: SampleSchedule, t: int) -> int:
    return schedule.size(t)


@dataclass(frozen=True)
class SeedParams:
    """Seed-sample sizes: ``t0`` primary and ``t1`` secondary."""

    t0: int
    t1: int
    max_seed_exponent: float = 24

    @classmethod
    def for_instance(
        cls,
        n: int,
        epsilon: float,
        k: int = 2,
        c1: float = 1.0,
        max_seed_exponent: float = 24,
        t0: int | None = None,
    ) -> "SeedParams":
        if t0 is None:
            t0 = math.ceil(1 / epsilon**2 - _CEIL_SLACK)
        t1 = math.ceil(c1 * math.log(max(k, 2)) ** 2 / epsilon**4 - _CEIL_SLACK)
        t0 = min(t0, n)
        # S0 must fit inside S1
        t1 = min(max(t1, t0), n)
        return cls(t0, t1, max_seed_exponent)

    def enumeration_exponent(self, k: int) -> float:
        return self.t0 * math.log2(k)

    def check_budget(self, k: int) -> None:
        if self.enumeration_exponent(k) > self.max_seed_exponent:
            raise BudgetExceededError(
                f"seed enumeration budget exceeded: {k}^{self.t0} seed assignments "
                f"(exponent {self.enumeration_exponent(k):.1f} > {self.max_seed_exponent}); "
                "raise epsilon or --max-seed-exponent"
            )


def sample_without_replacement(m: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """``s`` distinct indices drawn uniformly from ``range(m)``."""
    if s > m:
        raise DenseCspError("sample larger than domain")
    if s < 0:
        raise DenseCspError("sample size must be non-negative")
    if s == m:
        return np.arange(m, dtype=np.intp)
    return rng.choice(m, size=s, replace=False).astype(np.intp, copy=False)


def random_permutation(m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(m).astype(np.intp, copy=False)
