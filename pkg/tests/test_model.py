from __future__ import annotations

import numpy as np
import pytest

from acpsearch.model import (
    Assignment,
    Comparator,
    InfeasibleReductionError,
    IntegerProgram,
    LinearConstraint,
    Sense,
    VariableDef,
    check_feasibility,
    evaluate_objective,
    fix_variables,
    lift_solution,
)

from conftest import enumerate_optimum, oracle_objective, random_binary_program


def program_2var(cmp=Comparator.LE, rhs=1.0, sense=Sense.MAXIMIZE):
    return IntegerProgram(
        variables=(VariableDef("x0"), VariableDef("x1")),
        constraints=(LinearConstraint(((0, 1.0), (1, 1.0)), cmp, rhs),),
        objective=((0, 1.0), (1, 1.0)),
        sense=sense,
        name="toy",
    )


class TestConstruction:
    def test_variable_bounds_validated(self):
        with pytest.raises(ValueError):
            VariableDef("bad", lower=2.0, upper=1.0)

    def test_empty_constraint_rejected(self):
        with pytest.raises(ValueError):
            LinearConstraint((), Comparator.LE, 1.0)

    def test_duplicate_index_in_constraint_rejected(self):
        with pytest.raises(ValueError):
            LinearConstraint(((0, 1.0), (0, 2.0)), Comparator.LE, 1.0)

    def test_duplicate_index_in_objective_rejected(self):
        with pytest.raises(ValueError):
            IntegerProgram(
                variables=(VariableDef("x"),),
                constraints=(),
                objective=((0, 1.0), (0, 2.0)),
                sense=Sense.MAXIMIZE,
            )

    def test_out_of_range_indices_rejected(self):
        with pytest.raises(ValueError):
            IntegerProgram(
                variables=(VariableDef("x"),),
                constraints=(LinearConstraint(((3, 1.0),), Comparator.LE, 1.0),),
                objective=(),
                sense=Sense.MAXIMIZE,
            )


class TestEvaluateObjective:
    def test_direct_sum(self):
        assert evaluate_objective(program_2var(), (1.0, 0.0)) == 1.0

    def test_empty_objective(self):
        p = IntegerProgram(
            variables=(VariableDef("x"),),
            constraints=(),
            objective=(),
            sense=Sense.MAXIMIZE,
        )
        assert evaluate_objective(p, (1.0,)) == 0.0

    def test_zero_vector_annihilates(self):
        p = program_2var()
        assert evaluate_objective(p, (0.0, 0.0)) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_objective(program_2var(), (1.0,))

    def test_linearity(self, rng):
        for _ in range(50):
            p = random_binary_program(rng, max_vars=8, max_cons=4)
            n = p.n_variables
            x = [float(rng.integers(-3, 4)) for _ in range(n)]
            y = [float(rng.integers(-3, 4)) for _ in range(n)]
            fx = evaluate_objective(p, x)
            fy = evaluate_objective(p, y)
            fxy = evaluate_objective(p, [a + b for a, b in zip(x, y)])
            assert fxy == pytest.approx(fx + fy, abs=1e-9)


class TestCheckFeasibility:
    def test_violated_le_constraint(self):
        violations = check_feasibility(program_2var(), (1.0, 1.0))
        assert [(v.kind, v.index) for v in violations] == [("constraint", 0)]

    def test_satisfied(self):
        assert check_feasibility(program_2var(), (1.0, 0.0)) == []

    def test_integrality_violation_reported(self):
        violations = check_feasibility(program_2var(), (0.5, 0.0))
        assert ("integrality", 0) in [(v.kind, v.index) for v in violations]

    def test_bound_violation_reported(self):
        violations = check_feasibility(program_2var(), (2.0, 0.0))
        kinds = [(v.kind, v.index) for v in violations]
        assert ("bound", 0) in kinds

    def test_tolerance_respected(self):
        assert check_feasibility(program_2var(), (1.0 + 1e-8, 0.0)) == []


class TestFixVariables:
    def test_constant_moves_to_rhs(self):
        p = IntegerProgram(
            variables=(VariableDef("a"), VariableDef("b"), VariableDef("c")),
            constraints=(LinearConstraint(((0, 1.0), (1, 1.0), (2, 1.0)), Comparator.LE, 2.0),),
            objective=((0, 1.0), (1, 1.0), (2, 1.0)),
            sense=Sense.MAXIMIZE,
        )
        reduced = fix_variables(p, {2}, (0.0, 0.0, 1.0))
        assert reduced.program.n_variables == 2
        (con,) = reduced.program.constraints
        assert con.rhs == 1.0
        assert con.coeffs == ((0, 1.0), (1, 1.0))
        assert reduced.objective_offset == 1.0

    def test_satisfied_all_fixed_constraint_dropped(self):
        p = program_2var()
        reduced = fix_variables(p, {0, 1}, (0.0, 0.0))
        assert reduced.program.n_constraints == 0
        assert reduced.program.n_variables == 0

    def test_violated_all_fixed_constraint_raises(self):
        p = program_2var(cmp=Comparator.GE, rhs=1.0)
        with pytest.raises(InfeasibleReductionError):
            fix_variables(p, {0, 1}, (0.0, 0.0))

    def test_fixed_value_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            fix_variables(program_2var(), {0}, (3.0, 0.0))

    def test_roundtrip_and_offset_consistency(self, rng):
        # Lifting the restriction of x through the reduction reproduces x,
        # and parent objective == reduced objective + offset.
        for _ in range(100):
            p = random_binary_program(rng, max_vars=10, max_cons=6)
            n = p.n_variables
            opt = enumerate_optimum(p)
            if opt is None:
                continue
            _, x = opt
            k = int(rng.integers(0, n + 1))
            fixed = set(int(i) for i in rng.choice(n, size=k, replace=False))
            reduced = fix_variables(p, fixed, x)
            restriction = [x[i] for i in reduced.free_to_parent]
            lifted = reduced.lift(restriction, x)
            assert lifted == list(x)
            parent_obj = evaluate_objective(p, x)
            reduced_obj = evaluate_objective(reduced.program, restriction)
            assert parent_obj == pytest.approx(reduced_obj + reduced.objective_offset, abs=1e-9)

    def test_reduced_feasible_lifts_to_parent_feasible(self, rng):
        from acpsearch.subsolver import BranchAndBound, SolveRequest

        solver = BranchAndBound()
        checked = 0
        for _ in range(60):
            p = random_binary_program(rng, max_vars=10, max_cons=6)
            opt = enumerate_optimum(p)
            if opt is None:
                continue
            _, x = opt
            n = p.n_variables
            fixed = set(int(i) for i in rng.choice(n, size=n // 2, replace=False))
            reduced = fix_variables(p, fixed, x)
            result = solver.solve(SolveRequest(program=reduced.program, time_limit=5.0))
            if result.solution is None:
                continue
            lifted = reduced.lift(result.solution, x)
            assert check_feasibility(p, lifted) == []
            checked += 1
        assert checked >= 30


class TestLiftSolution:
    def test_single_free_variable(self):
        assert lift_solution((1.0,), (1,), (1.0, 0.0, 1.0)) == [1.0, 1.0, 1.0]

    def test_empty_free_set_is_identity(self):
        assert lift_solution((), (), (1.0, 0.0)) == [1.0, 0.0]

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            lift_solution((1.0, 0.0), (1,), (0.0, 0.0))


class TestAssignment:
    def test_cached_objective_matches_recomputation(self, rng):
        for _ in range(50):
            p = random_binary_program(rng, max_vars=8, max_cons=5)
            x = [float(rng.integers(0, 2)) for _ in range(p.n_variables)]
            a = Assignment.make(p, x)
            assert a.objective_value == pytest.approx(oracle_objective(p, x), abs=1e-9)
            assert a.feasible == (not check_feasibility(p, x))
