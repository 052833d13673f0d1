"""Adaptive constraint-partition search for integer programs.

The package bundles the core IP model, seeded benchmark generators, a
self-contained exact branch-and-bound sub-solver, an external-solver adapter
speaking CPLEX-LP, the adaptive search driver with its baselines, and a
benchmark harness with a CLI.
"""

from .driver import (
    AdaptiveState,
    Algorithm,
    Repartition,
    RunConfig,
    RunResult,
    TraceEvent,
    block_update,
    fix_optimize,
    run,
    run_acp,
    run_lns,
    run_solver_only,
)
from .generators import GraphSpec, SetCoverSpec, gen_graph, gen_is, gen_maxcut, gen_mvc, gen_sc
from .initial import Family, NoInitialSolutionError, solver_feasible, trivial_feasible
from .model import (
    Assignment,
    Comparator,
    InfeasibleReductionError,
    IntegerProgram,
    LinearConstraint,
    ReducedProgram,
    Sense,
    VariableDef,
    Violation,
    check_feasibility,
    evaluate_objective,
    fix_variables,
    lift_solution,
)
from .partition import ConstraintPartition, free_variables, partition_constraints, select_block
from .subsolver import (
    BranchAndBound,
    SolveMode,
    SolveRequest,
    SolveResult,
    SolveStatus,
    SubSolver,
    UnsupportedProgramError,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveState",
    "Algorithm",
    "Assignment",
    "BranchAndBound",
    "Comparator",
    "ConstraintPartition",
    "Family",
    "GraphSpec",
    "InfeasibleReductionError",
    "IntegerProgram",
    "LinearConstraint",
    "NoInitialSolutionError",
    "ReducedProgram",
    "Repartition",
    "RunConfig",
    "RunResult",
    "Sense",
    "SetCoverSpec",
    "SolveMode",
    "SolveRequest",
    "SolveResult",
    "SolveStatus",
    "SubSolver",
    "TraceEvent",
    "UnsupportedProgramError",
    "VariableDef",
    "Violation",
    "block_update",
    "check_feasibility",
    "evaluate_objective",
    "fix_optimize",
    "fix_variables",
    "free_variables",
    "gen_graph",
    "gen_is",
    "gen_maxcut",
    "gen_mvc",
    "gen_sc",
    "lift_solution",
    "partition_constraints",
    "run",
    "run_acp",
    "run_lns",
    "run_solver_only",
    "select_block",
    "solver_feasible",
    "trivial_feasible",
]
