"""Core integer-program model: variables, linear constraints, evaluation,
feasibility checking, and variable fixing (problem reduction).

Programs are immutable after construction; variable and constraint indices
are stable, so partitions and traces can reference them by position.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

FEASIBILITY_TOL = 1e-6
OBJECTIVE_TOL = 1e-9


class Sense(enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"

    def better(self, a: float, b: float) -> bool:
        """True when objective value ``a`` is strictly better than ``b``."""
        return a > b if self is Sense.MAXIMIZE else a < b

    def improvement(self, before: float, after: float) -> float:
        """Signed gain going from ``before`` to ``after`` (positive = better)."""
        return after - before if self is Sense.MAXIMIZE else before - after


class Comparator(enum.Enum):
    LE = "le"
    GE = "ge"
    EQ = "eq"

    def violation(self, lhs: float, rhs: float) -> float:
        """How far ``lhs`` is on the wrong side of ``rhs`` (0.0 if satisfied)."""
        if self is Comparator.LE:
            return max(0.0, lhs - rhs)
        if self is Comparator.GE:
            return max(0.0, rhs - lhs)
        return abs(lhs - rhs)

    def symbol(self) -> str:
        return {"le": "<=", "ge": ">=", "eq": "="}[self.value]


class InfeasibleReductionError(ValueError):
    """Fixing produced a constraint with no free variables that is violated."""


@dataclass(frozen=True)
class VariableDef:
    name: str
    lower: float = 0.0
    upper: float = 1.0
    integral: bool = True

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"variable {self.name!r}: lower {self.lower} > upper {self.upper}")

    @property
    def is_binary(self) -> bool:
        return self.integral and self.lower == 0.0 and self.upper == 1.0


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple[tuple[int, float], ...]
    cmp: Comparator
    rhs: float

    def __post_init__(self) -> None:
        coeffs = tuple((int(i), float(c)) for i, c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise ValueError("constraint has no coefficients")
        indices = [i for i, _ in coeffs]
        if len(set(indices)) != len(indices):
            raise ValueError("duplicate variable index in constraint")
        if min(indices) < 0:
            raise ValueError("negative variable index in constraint")

    def lhs(self, values) -> float:
        return sum(c * values[i] for i, c in self.coeffs)


@dataclass(frozen=True)
class IntegerProgram:
    variables: tuple[VariableDef, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, float], ...]
    sense: Sense
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        objective = tuple((int(i), float(c)) for i, c in self.objective)
        object.__setattr__(self, "objective", objective)
        n = len(self.variables)
        obj_indices = [i for i, _ in objective]
        if len(set(obj_indices)) != len(obj_indices):
            raise ValueError("duplicate variable index in objective")
        for i in obj_indices:
            if not 0 <= i < n:
                raise ValueError(f"objective references variable {i} outside 0..{n - 1}")
        for row, con in enumerate(self.constraints):
            for i, _ in con.coeffs:
                if not 0 <= i < n:
                    raise ValueError(f"constraint {row} references variable {i} outside 0..{n - 1}")

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    @property
    def all_binary(self) -> bool:
        return all(v.is_binary for v in self.variables)


@dataclass(frozen=True)
class Violation:
    """One feasibility defect: kind is 'constraint', 'bound' or 'integrality'."""

    kind: str
    index: int
    amount: float


@dataclass(frozen=True)
class Assignment:
    """A full variable-value vector with cached objective and feasibility."""

    values: tuple[float, ...]
    objective_value: float
    feasible: bool

    @classmethod
    def make(cls, program: IntegerProgram, values, tol: float = FEASIBILITY_TOL) -> "Assignment":
        values = tuple(float(v) for v in values)
        obj = evaluate_objective(program, values)
        feasible = not check_feasibility(program, values, tol)
        return cls(values=values, objective_value=obj, feasible=feasible)


def evaluate_objective(program: IntegerProgram, values) -> float:
    """Objective value of ``values``: the sum of coefficient * value terms."""
    if len(values) != program.n_variables:
        raise ValueError(f"expected {program.n_variables} values, got {len(values)}")
    return sum(c * values[i] for i, c in program.objective)


def check_feasibility(program: IntegerProgram, values, tol: float = FEASIBILITY_TOL) -> list[Violation]:
    """List every constraint, bound and integrality violation beyond ``tol``.

    An empty list means ``values`` is feasible for ``program``.
    """
    if len(values) != program.n_variables:
        raise ValueError(f"expected {program.n_variables} values, got {len(values)}")
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    out: list[Violation] = []
    for idx, var in enumerate(program.variables):
        v = values[idx]
        excess = max(var.lower - v, v - var.upper)
        if excess > tol:
            out.append(Violation("bound", idx, excess))
        if var.integral:
            frac = abs(v - round(v))
            if frac > tol:
                out.append(Violation("integrality", idx, frac))
    for row, con in enumerate(program.constraints):
        amount = con.cmp.violation(con.lhs(values), con.rhs)
        if amount > tol:
            out.append(Violation("constraint", row, amount))
    return out


@dataclass(frozen=True)
class ReducedProgram:
    """Sub-program over free variables, produced by :func:`fix_variables`.

    ``objective_offset`` is the constant contributed by the fixed variables,
    so ``parent objective == reduced objective + objective_offset`` and all
    logged objective values stay in parent-program units.
    """

    program: IntegerProgram
    free_to_parent: tuple[int, ...]
    objective_offset: float
    parent_variable_count: int

    def lift(self, reduced_values, parent_values) -> list[float]:
        return lift_solution(reduced_values, self.free_to_parent, parent_values)


def fix_variables(
    program: IntegerProgram,
    fixed,
    values,
    tol: float = FEASIBILITY_TOL,
) -> ReducedProgram:
    """Substitute the ``fixed`` variables at their ``values`` into ``program``.

    Fixed coefficients move into each constraint's right-hand side and into a
    recorded objective offset.  Constraints whose variables are all fixed are
    dropped when satisfied; a violated all-fixed constraint raises
    :class:`InfeasibleReductionError` (the fixing is inconsistent with
    feasibility).  Returns the reduced program plus the free-index -> parent
    mapping needed to lift solutions back.
    """
    n = program.n_variables
    if len(values) != n:
        raise ValueError(f"expected {n} values, got {len(values)}")
    fixed_set = set(fixed)
    for i in fixed_set:
        if not 0 <= i < n:
            raise ValueError(f"fixed index {i} outside 0..{n - 1}")
        var = program.variables[i]
        v = values[i]
        if v < var.lower - tol or v > var.upper + tol:
            raise ValueError(f"fixed value {v} outside bounds of variable {var.name!r}")
        if var.integral and abs(v - round(v)) > tol:
            raise ValueError(f"fixed value {v} not integral for variable {var.name!r}")

    free = [i for i in range(n) if i not in fixed_set]
    parent_to_free = {p: f for f, p in enumerate(free)}

    offset = 0.0
    reduced_obj: list[tuple[int, float]] = []
    for i, c in program.objective:
        if i in fixed_set:
            offset += c * values[i]
        else:
            reduced_obj.append((parent_to_free[i], c))

    reduced_cons: list[LinearConstraint] = []
    for row, con in enumerate(program.constraints):
        fixed_sum = 0.0
        free_terms: list[tuple[int, float]] = []
        for i, c in con.coeffs:
            if i in fixed_set:
                fixed_sum += c * values[i]
            else:
                free_terms.append((parent_to_free[i], c))
        if not free_terms:
            if con.cmp.violation(fixed_sum, con.rhs) > tol:
                raise InfeasibleReductionError(
                    f"constraint {row} is violated by the fixed values "
                    f"(lhs={fixed_sum}, {con.cmp.symbol()} {con.rhs})"
                )
            continue  # satisfied and fully fixed: drop
        reduced_cons.append(LinearConstraint(tuple(free_terms), con.cmp, con.rhs - fixed_sum))

    reduced = IntegerProgram(
        variables=tuple(program.variables[i] for i in free),
        constraints=tuple(reduced_cons),
        objective=tuple(reduced_obj),
        sense=program.sense,
        name=f"{program.name}/reduced" if program.name else "reduced",
    )
    return ReducedProgram(
        program=reduced,
        free_to_parent=tuple(free),
        objective_offset=offset,
        parent_variable_count=n,
    )


def lift_solution(reduced_values, free_to_parent, parent_values) -> list[float]:
    """Recombine a reduced-program solution with the fixed parent values."""
    if len(reduced_values) != len(free_to_parent):
        raise ValueError(
            f"expected {len(free_to_parent)} reduced values, got {len(reduced_values)}"
        )
    full = [float(v) for v in parent_values]
    for f, p in enumerate(free_to_parent):
        full[p] = float(reduced_values[f])
    return full
