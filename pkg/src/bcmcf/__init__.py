"""Budget-constrained minimum cost flow solvers.

Exact solution via lexicographic min-cost-circulation solves driven by a
parametric binary search, a packing-LP approximation scheme with
minimum-ratio cycle/path oracles, and a brute-force oracle for desk-scale
verification.
"""

from .exact import (
    CallbackVerdict,
    VerdictKind,
    budget_combination,
    enumerate_frontier,
    lambda_callback,
    solve_exact,
)
from .fptas import (
    CyclicGraphError,
    DualState,
    RatioResult,
    min_ratio_cycle,
    min_ratio_path_dag,
    rescale_bicriteria,
    solve_gk,
    solve_gk_acyclic,
    topological_order,
)
from .frontier import FrontierPoint
from .generate import generate_instance
from .mcc import (
    InternalSolverError,
    LexCost,
    ResidualGraph,
    find_negative_cycle,
    lambda_cost,
    min_cost_circulation,
)
from .model import (
    EdgeData,
    Flow,
    Instance,
    InstanceError,
    ParseError,
    Solution,
    SolutionDocument,
    Stats,
    ValidationReport,
    add_return_arc,
    circulation_form,
    combine_flows,
    format_fraction,
    format_solution,
    instance_stats,
    parse_instance,
    parse_solution,
    preprocess,
    project_flow,
    serialize_instance,
    validate_flow,
    zero_flow,
)
from .oracle import (
    EnumerationGuardError,
    enumerate_integral_flows,
    oracle_frontier,
    oracle_optimum,
)

__version__ = "0.1.0"

__all__ = [
    "CallbackVerdict",
    "CyclicGraphError",
    "DualState",
    "EdgeData",
    "EnumerationGuardError",
    "Flow",
    "FrontierPoint",
    "Instance",
    "InstanceError",
    "InternalSolverError",
    "LexCost",
    "ParseError",
    "RatioResult",
    "ResidualGraph",
    "Solution",
    "SolutionDocument",
    "Stats",
    "ValidationReport",
    "VerdictKind",
    "add_return_arc",
    "budget_combination",
    "circulation_form",
    "combine_flows",
    "enumerate_frontier",
    "enumerate_integral_flows",
    "find_negative_cycle",
    "format_fraction",
    "format_solution",
    "generate_instance",
    "instance_stats",
    "lambda_callback",
    "lambda_cost",
    "min_cost_circulation",
    "min_ratio_cycle",
    "min_ratio_path_dag",
    "oracle_frontier",
    "oracle_optimum",
    "parse_instance",
    "parse_solution",
    "preprocess",
    "project_flow",
    "rescale_bicriteria",
    "serialize_instance",
    "solve_exact",
    "solve_gk",
    "solve_gk_acyclic",
    "topological_order",
    "validate_flow",
    "zero_flow",
]
