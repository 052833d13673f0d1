"""Shared test helpers: an independent brute-force oracle and random
program builders.

The oracle computes objectives and feasibility with its own arithmetic,
straight from the program data, so it never shares a code path with the
operations it checks.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from acpsearch.model import Comparator, IntegerProgram, LinearConstraint, Sense, VariableDef


def oracle_objective(program: IntegerProgram, values) -> float:
    total = 0.0
    for i, c in program.objective:
        total += c * values[i]
    return total


def oracle_feasible(program: IntegerProgram, values, tol: float = 1e-9) -> bool:
    for idx, var in enumerate(program.variables):
        v = values[idx]
        if v < var.lower - tol or v > var.upper + tol:
            return False
        if var.integral and abs(v - round(v)) > tol:
            return False
    for con in program.constraints:
        lhs = 0.0
        for i, c in con.coeffs:
            lhs += c * values[i]
        if con.cmp is Comparator.LE and lhs > con.rhs + tol:
            return False
        if con.cmp is Comparator.GE and lhs < con.rhs - tol:
            return False
        if con.cmp is Comparator.EQ and abs(lhs - con.rhs) > tol:
            return False
    return True


def enumerate_optimum(program: IntegerProgram) -> tuple[float, tuple[float, ...]] | None:
    """Exhaustive search over integer boxes; None when infeasible."""
    ranges = []
    for var in program.variables:
        assert var.integral, "oracle only enumerates integral variables"
        lo, hi = int(round(var.lower)), int(round(var.upper))
        ranges.append(range(lo, hi + 1))
    best = None
    best_x = None
    for combo in itertools.product(*ranges):
        values = [float(v) for v in combo]
        if not oracle_feasible(program, values):
            continue
        obj = oracle_objective(program, values)
        if best is None:
            better = True
        elif program.sense is Sense.MAXIMIZE:
            better = obj > best
        else:
            better = obj < best
        if better:
            best = obj
            best_x = tuple(values)
    if best is None:
        return None
    return best, best_x


def random_binary_program(
    rng: np.random.Generator,
    max_vars: int = 16,
    max_cons: int = 12,
    force_feasible: bool = True,
    comparators: tuple[Comparator, ...] = (Comparator.LE, Comparator.GE, Comparator.EQ),
) -> IntegerProgram:
    """Random all-binary program; when force_feasible, constraints are built
    around a hidden witness assignment so at least one feasible point exists."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(0, max_cons + 1))
    witness = [float(rng.integers(0, 2)) for _ in range(n)]
    constraints = []
    for _ in range(m):
        width = int(rng.integers(1, min(n, 5) + 1))
        idx = sorted(int(i) for i in rng.choice(n, size=width, replace=False))
        coeffs = []
        for i in idx:
            c = 0
            while c == 0:
                c = int(rng.integers(-5, 6))
            coeffs.append((i, float(c)))
        cmp = comparators[int(rng.integers(0, len(comparators)))]
        lhs = sum(c * witness[i] for i, c in coeffs)
        if force_feasible:
            if cmp is Comparator.LE:
                rhs = lhs + int(rng.integers(0, 4))
            elif cmp is Comparator.GE:
                rhs = lhs - int(rng.integers(0, 4))
            else:
                rhs = lhs
        else:
            rhs = float(int(rng.integers(-8, 9)))
        constraints.append(LinearConstraint(tuple(coeffs), cmp, float(rhs)))
    objective = tuple(
        (i, float(c))
        for i, c in enumerate(int(v) for v in rng.integers(-9, 10, size=n))
        if c != 0
    )
    sense = Sense.MAXIMIZE if rng.integers(0, 2) == 0 else Sense.MINIMIZE
    return IntegerProgram(
        variables=tuple(VariableDef(f"v{i}") for i in range(n)),
        constraints=tuple(constraints),
        objective=objective,
        sense=sense,
        name="random",
    )


def random_mixed_program(rng: np.random.Generator, max_vars: int = 10) -> IntegerProgram:
    """Random program with mixed bounds/integrality, for interchange tests."""
    n = int(rng.integers(1, max_vars + 1))
    variables = []
    for i in range(n):
        lo = float(np.round(rng.uniform(-10, 5), 4))
        hi = lo + float(np.round(rng.uniform(0, 10), 4))
        integral = bool(rng.integers(0, 2))
        if integral:
            lo, hi = float(int(lo)), float(int(hi))
        variables.append(VariableDef(f"w{i}", lower=lo, upper=hi, integral=integral))
    m = int(rng.integers(1, 8))
    constraints = []
    for _ in range(m):
        width = int(rng.integers(1, min(n, 4) + 1))
        idx = sorted(int(i) for i in rng.choice(n, size=width, replace=False))
        coeffs = tuple((i, float(np.round(rng.uniform(-4, 4), 6)) or 1.0) for i in idx)
        cmp = (Comparator.LE, Comparator.GE, Comparator.EQ)[int(rng.integers(0, 3))]
        constraints.append(LinearConstraint(coeffs, cmp, float(np.round(rng.uniform(-9, 9), 6))))
    objective = tuple(
        (i, float(np.round(rng.uniform(-5, 5), 6)) or 0.5) for i in range(n) if rng.integers(0, 2)
    )
    sense = Sense.MAXIMIZE if rng.integers(0, 2) == 0 else Sense.MINIMIZE
    return IntegerProgram(
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective=objective,
        sense=sense,
        name="mixed",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
