from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace


def default_threads() -> int:
    return max(1, int(os.environ.get("DENSECSP_THREADS", "1")))


@dataclass(frozen=True)
class SolverConfig:
    """Tunable constants and switches shared by all solvers.

    The defaults are the literal reading of the algorithms: ``delta = 2/3``,
    unit constants, ``t0 = ceil(1/eps^2)`` and ``k**4`` schedule scaling for
    the r-CSP solver.
    """

    delta: float = 2 / 3
    c_schedule: float = 1.0
    c1: float = 1.0
    max_seed_exponent: float = 24
    k_factor_exponent: float = 4.0
    threads: int = 1
    # Max-Cut branch options
    independent_orders: bool = False
    shared_samples: bool = False
    # Use every placed vertex / every critical tuple instead of a sample.
    full_sampling: bool = False
    # Override ceil(1/eps^2); needed when eps is too small to enumerate 2^t0.
    t0: int | None = None
    # Run only this seed branch instead of all of them (query measurements).
    fixed_branch: int | None = None
    oracle_budget: float = 26
    # Parallel runner: superstep growth factor minus one (defaults to eps).
    superstep_growth: float | None = None
    debug_trace: bool = False

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)
