"""Sublinear-time additive approximation for dense Max-Cut and r-CSPs."""

from .config import SolverConfig
from .core import (
    UNASSIGNED,
    Assignment,
    BudgetExceededError,
    CspInstance,
    DenseCspError,
    DenseGraph,
    IncompleteAssignmentError,
    encode_maxcut_as_csp,
    evaluate_csp,
    evaluate_cut,
    read_csp,
    read_graph,
    read_instance,
    write_csp,
    write_graph,
)
from .generators import (
    PlantedInstance,
    SignedGraph,
    encode_correlation_clustering,
    gen_gnp,
    gen_planted_hard,
    gen_random_rcsp,
    gen_signed_graph,
    planted_value_expectation,
)
from .maxcut import GreedyState, greedy_place_vertex, run_seed_branch, solve_maxcut
from .oracle import brute_force_csp, brute_force_maxcut, exact_greedy_reference
from .parallel import solve_rcsp_parallel, superstep_boundaries
from .rcsp import (
    CriticalTuple,
    count_critical_tuples,
    greedy_place_variable,
    sample_critical_tuples,
    solve_rcsp,
)
from .report import RunReport, verify
from .sampling import (
    SampleSchedule,
    SeedParams,
    random_permutation,
    sample_size,
    sample_without_replacement,
    substream,
)

__version__ = "0.1.0"
