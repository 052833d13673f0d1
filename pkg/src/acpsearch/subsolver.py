"""Sub-solver contract plus a self-contained exact branch-and-bound for
binary linear programs.

The search is depth-first over decision variables with constraint
propagation: after every assignment, each touched constraint's achievable
left-hand-side interval [fixed + negative remainder, fixed + positive
remainder] is rechecked; an empty interval kills the node, and a variable
whose one value would empty some interval is forced to the other value on
the spot.  Forced assignments are logically implied, so skipping their
sibling subtrees preserves exactness.  The objective prune is an optimistic
completion (every remaining helpful coefficient taken) tested against the
incumbent.  There is no LP relaxation: the solver stays dependency-free.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Protocol

from .model import IntegerProgram, Sense, check_feasibility, evaluate_objective

_EPS = 1e-9


class UnsupportedProgramError(ValueError):
    """The built-in solver only accepts all-binary programs."""


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE_TIME_LIMIT = "feasible_time_limit"
    INFEASIBLE = "infeasible"
    NO_SOLUTION_TIME_LIMIT = "no_solution_time_limit"
    SOLVER_ERROR = "solver_error"

    @property
    def has_solution(self) -> bool:
        return self in (SolveStatus.OPTIMAL, SolveStatus.FEASIBLE_TIME_LIMIT)


class SolveMode(enum.Enum):
    OPTIMIZE = "optimize"
    FEASIBILITY_FIRST = "feasibility_first"


@dataclass
class SolveRequest:
    """One solve call.

    ``stall_node_limit`` is an optional give-up rule for iterative callers:
    stop after that many decisions without an incumbent improvement and
    return the best solution so far.  It never affects proven-optimal
    results (an exhausted search still reports Optimal) and keeps the search
    fully deterministic, unlike the wall-clock limit.
    """

    program: IntegerProgram
    warm_start: list[float] | None = None
    time_limit: float = 10.0
    mode: SolveMode = SolveMode.OPTIMIZE
    stall_node_limit: int | None = None

    def __post_init__(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.stall_node_limit is not None and self.stall_node_limit < 1:
            raise ValueError("stall_node_limit must be positive")


@dataclass
class SolveResult:
    status: SolveStatus
    solution: list[float] | None = None
    objective: float | None = None
    nodes_explored: int = 0
    elapsed: float = 0.0
    message: str = ""


class SubSolver(Protocol):
    def solve(self, request: SolveRequest) -> SolveResult: ...


class _Conflict(Exception):
    pass


@dataclass
class BranchAndBound:
    """Exact solver for binary programs; anytime under a wall-clock limit.

    Branching is deterministic and seed-independent: decision variables in
    constraint-structure order (first appearance in the constraint list,
    unconstrained variables last by descending |objective coefficient|),
    trying the objective-improving value first.  In feasibility-first mode
    the search instead tries each variable's lower bound first and stops at
    the first feasible leaf.  The wall-clock deadline is checked every
    ``check_interval`` decisions.
    """

    check_interval: int = 1024

    def solve(self, request: SolveRequest) -> SolveResult:
        program = request.program
        start = time.monotonic()
        deadline = start + request.time_limit
        for var in program.variables:
            if not var.is_binary:
                raise UnsupportedProgramError(
                    f"variable {var.name!r} is not binary; route this program "
                    "to an external solver"
                )

        n = program.n_variables
        maximize = program.sense is Sense.MAXIMIZE
        # Internal objective is always maximized.
        coeff = [0.0] * n
        for i, c in program.objective:
            coeff[i] = c if maximize else -c

        warm = request.warm_start
        if warm is not None:
            if len(warm) != n:
                raise ValueError(f"warm start length {len(warm)} != {n}")
            if check_feasibility(program, warm):
                raise ValueError("warm start is not feasible for the program")
            if request.mode is SolveMode.FEASIBILITY_FIRST:
                return SolveResult(
                    status=SolveStatus.FEASIBLE_TIME_LIMIT,
                    solution=[float(v) for v in warm],
                    objective=evaluate_objective(program, warm),
                    nodes_explored=0,
                    elapsed=time.monotonic() - start,
                )

        best: list[float] | None = None
        best_internal = -float("inf")
        if warm is not None:
            best = [float(round(v)) for v in warm]
            best_internal = sum(coeff[i] * best[i] for i in range(n))

        m = program.n_constraints
        kind = [0] * m  # 0: <=, 1: >=, 2: ==
        rhs = [0.0] * m
        fixed = [0.0] * m
        pos_rem = [0.0] * m
        neg_rem = [0.0] * m
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        con_vars: list[tuple[tuple[int, float], ...]] = []
        for j, con in enumerate(program.constraints):
            kind[j] = {"le": 0, "ge": 1, "eq": 2}[con.cmp.value]
            rhs[j] = con.rhs
            con_vars.append(con.coeffs)
            for i, c in con.coeffs:
                adj[i].append((j, c))
                if c > 0:
                    pos_rem[j] += c
                else:
                    neg_rem[j] += c

        # Branch in constraint-structure order so variables coupled by a
        # constraint are decided near each other and conflicts stay local.
        order: list[int] = []
        seen = [False] * n
        for con in program.constraints:
            for i, _ in con.coeffs:
                if not seen[i]:
                    seen[i] = True
                    order.append(i)
        leftovers = [i for i in range(n) if not seen[i]]
        leftovers.sort(key=lambda i: (-abs(coeff[i]), i))
        order.extend(leftovers)

        ff = request.mode is SolveMode.FEASIBILITY_FIRST
        first_val = [0] * n
        for i in range(n):
            first_val[i] = 0 if ff else (1 if coeff[i] > 0 else 0)

        assigned = [-1] * n  # -1 unassigned, else 0/1
        trail: list[int] = []
        state = {"obj": 0.0, "opt": sum(c for c in coeff if c > 0)}

        def place(i: int, v: int) -> None:
            # Low-level assignment: no legality checks here.
            assigned[i] = v
            trail.append(i)
            ci = coeff[i]
            state["obj"] += ci * v
            if ci > 0:
                state["opt"] -= ci
            for j, a in adj[i]:
                fixed[j] += a * v
                if a > 0:
                    pos_rem[j] -= a
                else:
                    neg_rem[j] -= a

        def unplace(i: int) -> None:
            v = assigned[i]
            assigned[i] = -1
            ci = coeff[i]
            state["obj"] -= ci * v
            if ci > 0:
                state["opt"] += ci
            for j, a in adj[i]:
                fixed[j] -= a * v
                if a > 0:
                    pos_rem[j] += a
                else:
                    neg_rem[j] += a

        def examine(j: int) -> None:
            """Recheck constraint j: raise on dead interval, force implied
            values of its free variables (appended to the trail)."""
            lo = fixed[j] + neg_rem[j]
            hi = fixed[j] + pos_rem[j]
            kj = kind[j]
            r = rhs[j]
            if kj != 1 and lo > r + _EPS:
                raise _Conflict
            if kj != 0 and hi < r - _EPS:
                raise _Conflict
            for u, b in con_vars[j]:
                if assigned[u] >= 0:
                    continue
                if kj != 1:  # <= side: value raising the minimum may die
                    if b > 0:
                        if lo + b > r + _EPS:
                            _force(u, 0)
                    else:
                        if lo - b > r + _EPS:
                            _force(u, 1)
                if kj != 0:  # >= side: value lowering the maximum may die
                    if b > 0:
                        if hi - b < r - _EPS:
                            _force(u, 1)
                    else:
                        if hi + b < r - _EPS:
                            _force(u, 0)

        def _force(u: int, v: int) -> None:
            if assigned[u] >= 0:
                if assigned[u] != v:
                    raise _Conflict
                return
            place(u, v)

        def propagate(from_pos: int) -> None:
            """Process trail entries from ``from_pos``, fixing implications
            until a fixpoint; raises _Conflict on a dead constraint."""
            qi = from_pos
            while qi < len(trail):
                i = trail[qi]
                qi += 1
                for j, _ in adj[i]:
                    examine(j)
            if best is not None and state["obj"] + state["opt"] <= best_internal + _EPS:
                raise _Conflict  # cannot strictly beat the incumbent

        def undo_to(mark: int) -> None:
            while len(trail) > mark:
                unplace(trail.pop())

        nodes = 0
        stall_limit = request.stall_node_limit
        last_improvement = 0
        check_interval = self.check_interval
        monotonic = time.monotonic

        # Root propagation: singleton rows and empty intervals resolve here.
        root_conflict = False
        try:
            for j in range(m):
                examine(j)
            propagate(0)
        except _Conflict:
            root_conflict = True
        if root_conflict:
            # With a feasible warm start the root cannot be infeasible; the
            # conflict then came from the incumbent bound (warm start is
            # already optimal for the propagated relaxation).
            elapsed = time.monotonic() - start
            if best is None:
                return SolveResult(
                    status=SolveStatus.INFEASIBLE, nodes_explored=0, elapsed=elapsed
                )
            return SolveResult(
                status=SolveStatus.OPTIMAL,
                solution=[float(v) for v in best],
                objective=evaluate_objective(program, best),
                nodes_explored=0,
                elapsed=elapsed,
            )

        # Decision stack entries: [var, tried_phase, trail_mark, order_pos].
        stack: list[list[int]] = []
        pos = 0
        stop = ""

        def record_leaf() -> bool:
            """Record the completed assignment; True if it improved."""
            nonlocal best, best_internal, last_improvement
            obj = state["obj"]
            if best is None or obj > best_internal + _EPS:
                best = [float(assigned[i]) for i in range(n)]
                best_internal = obj
                last_improvement = nodes
                return True
            return False

        def try_place(var: int, value: int, mark: int) -> bool:
            nonlocal nodes
            nodes += 1
            place(var, value)
            try:
                propagate(mark)
                return True
            except _Conflict:
                undo_to(mark)
                return False

        def backtrack() -> bool:
            """Flip the deepest decision with an untried value; False when
            the whole tree is exhausted."""
            nonlocal pos
            while stack:
                var, phase, mark, prev_pos = stack[-1]
                undo_to(mark)
                pos = prev_pos
                if phase == 0:
                    stack[-1][1] = 1
                    if try_place(var, 1 - first_val[var], mark):
                        return True
                stack.pop()
            return False

        next_deadline_check = check_interval
        if monotonic() >= deadline:
            stop = "timeout"
        while not stop:
            if stall_limit is not None and nodes - last_improvement >= stall_limit:
                stop = "stall"
                break
            if nodes >= next_deadline_check:
                next_deadline_check = nodes + check_interval
                if monotonic() >= deadline:
                    stop = "timeout"
                    break
            while pos < n and assigned[order[pos]] >= 0:
                pos += 1
            if pos == n:
                improved = record_leaf()
                if ff and improved:
                    stop = "first_leaf"
                    break
                if not backtrack():
                    stop = "exhausted"
                    break
                continue
            var = order[pos]
            mark = len(trail)
            if try_place(var, first_val[var], mark):
                stack.append([var, 0, mark, pos])
                continue
            if try_place(var, 1 - first_val[var], mark):
                stack.append([var, 1, mark, pos])
                continue
            if not backtrack():
                stop = "exhausted"
                break

        elapsed = time.monotonic() - start
        message = ""
        if stop == "stall":
            message = "stalled: node budget without improvement exhausted"
        elif stop == "first_leaf":
            message = "feasibility-first: stopped at first feasible leaf"
        if best is not None:
            solution = [float(v) for v in best]
            objective = evaluate_objective(program, solution)
            status = SolveStatus.OPTIMAL if stop == "exhausted" else SolveStatus.FEASIBLE_TIME_LIMIT
            return SolveResult(
                status=status,
                solution=solution,
                objective=objective,
                nodes_explored=nodes,
                elapsed=elapsed,
                message=message,
            )
        if stop == "exhausted":
            return SolveResult(
                status=SolveStatus.INFEASIBLE, nodes_explored=nodes, elapsed=elapsed
            )
        return SolveResult(
            status=SolveStatus.NO_SOLUTION_TIME_LIMIT,
            nodes_explored=nodes,
            elapsed=elapsed,
            message=message,
        )
