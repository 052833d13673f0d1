"""Initial feasible solutions: a trivially feasible point per benchmark
family, or a budgeted sub-solver call (the solver-seeded variant)."""

from __future__ import annotations

import enum

from .model import Assignment, IntegerProgram
from .subsolver import SolveMode, SolveRequest, SubSolver


class NoInitialSolutionError(RuntimeError):
    """No feasible starting point could be constructed or found in budget."""


class Family(enum.Enum):
    IS = "is"
    MVC = "mvc"
    MAXCUT = "maxcut"
    SC = "sc"
    GENERIC = "generic"


def trivial_feasible(program: IntegerProgram, family: Family = Family.GENERIC) -> Assignment:
    """Canonical trivially feasible point for each family.

    Independent set and max-cut start from all zeros, vertex cover and set
    cover from all ones.  Generic programs try every variable at its lower
    bound, then its upper bound.
    """
    n = program.n_variables
    if family is Family.IS or family is Family.MAXCUT:
        candidates = [[0.0] * n]
    elif family is Family.MVC or family is Family.SC:
        candidates = [[1.0] * n]
    else:
        candidates = [
            [v.lower for v in program.variables],
            [v.upper for v in program.variables],
        ]
    for values in candidates:
        assignment = Assignment.make(program, values)
        if assignment.feasible:
            return assignment
    raise NoInitialSolutionError(
        f"no trivial feasible point for {program.name or 'program'} "
        f"(family hint: {family.value})"
    )


def solver_feasible(program: IntegerProgram, solver: SubSolver, budget: float) -> Assignment:
    """First feasible assignment the sub-solver finds within ``budget``."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    result = solver.solve(
        SolveRequest(program=program, time_limit=budget, mode=SolveMode.FEASIBILITY_FIRST)
    )
    if not result.status.has_solution or result.solution is None:
        raise NoInitialSolutionError(
            f"sub-solver found no feasible solution within {budget:.3f}s "
            f"(status: {result.status.value})"
        )
    assignment = Assignment.make(program, result.solution)
    if not assignment.feasible:
        raise NoInitialSolutionError("sub-solver returned an infeasible assignment")
    return assignment
