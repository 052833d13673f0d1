"""The adaptive constraint-partition search loop, its solver-seeded variant,
the variable-block LNS baseline, and the solver-only baseline.

A run owns its incumbent, rng and solver exclusively; runs with different
seeds or instances can execute concurrently with no shared state.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, replace

import numpy as np

from .initial import Family, solver_feasible, trivial_feasible
from .model import Assignment, IntegerProgram, Sense, fix_variables
from .partition import ConstraintPartition, free_variables, partition_constraints, select_block
from .subsolver import (
    BranchAndBound,
    SolveMode,
    SolveRequest,
    SolveResult,
    SolveStatus,
    SubSolver,
)

log = logging.getLogger(__name__)


class Algorithm(enum.Enum):
    ACP = "acp"
    ACP2 = "acp2"
    LNS = "lns"
    SOLVER_ONLY = "solver_only"


class Repartition(enum.Enum):
    EVERY_ITERATION = "every"
    ON_K_CHANGE = "on-k-change"


@dataclass
class RunConfig:
    total_time: float
    algorithm: Algorithm = Algorithm.ACP
    k0: int = 2
    epsilon: float = 0.01
    t: int = 3
    p: float = 0.1
    seed: int = 0
    k_min: int = 1
    repartition: Repartition = Repartition.EVERY_ITERATION
    init_budget: float | None = None  # solver-seeded init; defaults to p * total_time
    max_iterations: int | None = None
    check_every: int = 1  # incumbent feasibility spot-check period (0 disables)
    # Give-up rule handed to sub-solves so unused per-iteration budget rolls
    # over to later iterations; the solver-only baseline stays unconfigured.
    sub_stall_nodes: int | None = 1 << 18

    def __post_init__(self) -> None:
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")
        if not 0 < self.p <= 1:
            raise ValueError("p must be in (0, 1]")
        if self.k0 < 1:
            raise ValueError("k0 must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.k_min < 1:
            raise ValueError("k_min must be >= 1")


@dataclass(frozen=True)
class AdaptiveState:
    """Current block count plus the stall bookkeeping that shrinks it."""

    k: int
    epsilon: float
    t: int
    stall_count: int = 0
    k_min: int = 1


@dataclass(frozen=True)
class TraceEvent:
    iteration: int
    wall_clock: float
    k: int
    block: int
    free_var_count: int
    sub_status: str
    objective_before: float
    objective_after: float
    accepted: bool
    stall_count: int


TRACE_FIELDS = (
    "iteration",
    "wall_clock",
    "k",
    "block",
    "free_var_count",
    "sub_status",
    "objective_before",
    "objective_after",
    "accepted",
    "stall_count",
)


@dataclass
class RunResult:
    incumbent: Assignment
    trace: list[TraceEvent]
    proven_optimal: bool = False
    elapsed: float = 0.0
    final_k: int | None = None


def fix_optimize(
    program: IntegerProgram,
    incumbent: Assignment,
    x_sub: set[int],
    solver: SubSolver,
    time_limit: float,
    stall_node_limit: int | None = None,
) -> tuple[Assignment, SolveResult | None]:
    """Fix everything outside ``x_sub`` at the incumbent, solve the reduced
    program warm-started with the incumbent's restriction, lift, and return
    the better of the lifted solution and the incumbent.

    Solver errors and infeasible sub-solves leave the incumbent unchanged.
    """
    n = program.n_variables
    if not x_sub:
        return incumbent, None
    fixed = [i for i in range(n) if i not in x_sub]
    reduced = fix_variables(program, fixed, incumbent.values)
    warm = [incumbent.values[p] for p in reduced.free_to_parent]
    request = SolveRequest(
        program=reduced.program,
        warm_start=warm,
        time_limit=max(time_limit, 1e-3),
        mode=SolveMode.OPTIMIZE,
        stall_node_limit=stall_node_limit,
    )
    result = solver.solve(request)
    if not result.status.has_solution or result.solution is None:
        log.debug("sub-solve kept incumbent (status: %s)", result.status.value)
        return incumbent, result
    lifted = reduced.lift(result.solution, incumbent.values)
    candidate = Assignment.make(program, lifted)
    if candidate.feasible and program.sense.better(
        candidate.objective_value, incumbent.objective_value
    ):
        return candidate, result
    return incumbent, result


def block_update(state: AdaptiveState, f_before: float, f_after: float, sense: Sense) -> AdaptiveState:
    """Stall rule: an iteration whose relative improvement falls below
    epsilon stalls; after ``t`` consecutive stalls, k drops by one (never
    below k_min) and the counter resets."""
    improvement = abs(sense.improvement(f_before, f_after))
    stalled = improvement < state.epsilon * max(abs(f_before), 1.0)
    if not stalled:
        return replace(state, stall_count=0)
    stall_count = state.stall_count + 1
    if stall_count >= state.t:
        return replace(state, k=max(state.k - 1, state.k_min), stall_count=0)
    return replace(state, stall_count=stall_count)


def _initial_assignment(
    program: IntegerProgram, config: RunConfig, solver: SubSolver, family: Family
) -> Assignment:
    if config.algorithm is Algorithm.ACP2:
        budget = config.init_budget
        if budget is None:
            budget = config.p * config.total_time
        return solver_feasible(program, solver, budget)
    return trivial_feasible(program, family)


def run(
    program: IntegerProgram,
    config: RunConfig,
    solver: SubSolver | None = None,
    family: Family = Family.GENERIC,
) -> RunResult:
    """Dispatch a run per ``config.algorithm``; returns the final incumbent,
    the per-iteration trace, and run metadata."""
    if solver is None:
        solver = BranchAndBound()
    if config.algorithm is Algorithm.SOLVER_ONLY:
        return run_solver_only(program, config, solver)
    if config.algorithm is Algorithm.LNS:
        return run_lns(program, config, solver, family)
    return run_acp(program, config, solver, family)


def run_acp(
    program: IntegerProgram,
    config: RunConfig,
    solver: SubSolver | None = None,
    family: Family = Family.GENERIC,
) -> RunResult:
    """Main loop: repartition constraints into k blocks, pick one (never the
    same block twice in a row), free its variables, fix-and-optimize under
    the per-iteration cap, then apply the stall rule to k.

    Stops at the wall-clock budget, at ``max_iterations``, or early when a
    k=1 sub-solve covered every variable and proved optimality (the incumbent
    is then the global optimum).
    """
    if config.algorithm not in (Algorithm.ACP, Algorithm.ACP2):
        raise ValueError(f"run_acp cannot run {config.algorithm.value}")
    if solver is None:
        solver = BranchAndBound()
    start = time.monotonic()
    deadline = start + config.total_time
    rng = np.random.default_rng(config.seed)
    incumbent = _initial_assignment(program, config, solver, family)

    n = program.n_variables
    m = program.n_constraints
    state = AdaptiveState(
        k=max(min(config.k0, m if m else 1), config.k_min),
        epsilon=config.epsilon,
        t=config.t,
        k_min=config.k_min,
    )
    trace: list[TraceEvent] = []
    partition: ConstraintPartition | None = None
    partition_k = -1
    prev_block: int | None = None
    proven = False
    iteration = 0

    while time.monotonic() < deadline:
        if config.max_iterations is not None and iteration >= config.max_iterations:
            break
        iteration += 1
        if m > 0:
            if (
                partition is None
                or config.repartition is Repartition.EVERY_ITERATION
                or partition_k != state.k
            ):
                partition = partition_constraints(program, state.k, rng)
                partition_k = state.k
            block = select_block(partition, rng, previous=prev_block)
            x_sub = free_variables(program, partition, block)
        else:
            block = 0
            x_sub = set(range(n))

        limit = min(config.p * config.total_time, deadline - time.monotonic())
        if limit <= 0:
            iteration -= 1
            break
        f_before = incumbent.objective_value
        incumbent, result = fix_optimize(
            program, incumbent, x_sub, solver, limit, config.sub_stall_nodes
        )
        accepted = incumbent.objective_value != f_before
        state = block_update(state, f_before, incumbent.objective_value, program.sense)
        trace.append(
            TraceEvent(
                iteration=iteration,
                wall_clock=time.monotonic() - start,
                k=partition_k if m > 0 else 1,
                block=block,
                free_var_count=len(x_sub),
                sub_status=result.status.value if result else "skipped",
                objective_before=f_before,
                objective_after=incumbent.objective_value,
                accepted=accepted,
                stall_count=state.stall_count,
            )
        )
        prev_block = block
        if config.check_every and iteration % config.check_every == 0:
            assert incumbent.feasible, "incumbent lost feasibility"
        if (
            result is not None
            and result.status is SolveStatus.OPTIMAL
            and len(x_sub) == n
        ):
            proven = True
            break

    return RunResult(
        incumbent=incumbent,
        trace=trace,
        proven_optimal=proven,
        elapsed=time.monotonic() - start,
        final_k=state.k,
    )


def _partition_indices(count: int, k: int, rng: np.random.Generator) -> list[list[int]]:
    order = [int(i) for i in rng.permutation(count)]
    base, extra = divmod(count, k)
    blocks: list[list[int]] = []
    pos = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        blocks.append(order[pos : pos + size])
        pos += size
    return blocks


def run_lns(
    program: IntegerProgram,
    config: RunConfig,
    solver: SubSolver | None = None,
    family: Family = Family.GENERIC,
) -> RunResult:
    """Baseline with the same loop shape but blocks of VARIABLES and a fixed
    block count for the whole run (no adaptive update)."""
    if config.algorithm is not Algorithm.LNS:
        config = replace(config, algorithm=Algorithm.LNS)
    if solver is None:
        solver = BranchAndBound()
    start = time.monotonic()
    deadline = start + config.total_time
    rng = np.random.default_rng(config.seed)
    incumbent = trivial_feasible(program, family)

    n = program.n_variables
    k = max(min(config.k0, n if n else 1), 1)
    trace: list[TraceEvent] = []
    blocks: list[list[int]] | None = None
    prev_block: int | None = None
    proven = False
    iteration = 0

    while time.monotonic() < deadline:
        if config.max_iterations is not None and iteration >= config.max_iterations:
            break
        iteration += 1
        if blocks is None or config.repartition is Repartition.EVERY_ITERATION:
            blocks = _partition_indices(n, k, rng)
        if k == 1:
            block = 0
        else:
            while True:
                block = int(rng.integers(0, k))
                if block != prev_block:
                    break
        x_sub = set(blocks[block])

        limit = min(config.p * config.total_time, deadline - time.monotonic())
        if limit <= 0:
            iteration -= 1
            break
        f_before = incumbent.objective_value
        incumbent, result = fix_optimize(
            program, incumbent, x_sub, solver, limit, config.sub_stall_nodes
        )
        trace.append(
            TraceEvent(
                iteration=iteration,
                wall_clock=time.monotonic() - start,
                k=k,
                block=block,
                free_var_count=len(x_sub),
                sub_status=result.status.value if result else "skipped",
                objective_before=f_before,
                objective_after=incumbent.objective_value,
                accepted=incumbent.objective_value != f_before,
                stall_count=0,
            )
        )
        prev_block = block
        if config.check_every and iteration % config.check_every == 0:
            assert incumbent.feasible, "incumbent lost feasibility"
        if result is not None and result.status is SolveStatus.OPTIMAL and len(x_sub) == n:
            proven = True
            break

    return RunResult(
        incumbent=incumbent,
        trace=trace,
        proven_optimal=proven,
        elapsed=time.monotonic() - start,
        final_k=k,
    )


class SolverOnlyFailedError(RuntimeError):
    """The solo solver produced no feasible solution within the budget."""


def run_solver_only(
    program: IntegerProgram, config: RunConfig, solver: SubSolver | None = None
) -> RunResult:
    """One sub-solver call on the full program with the whole budget."""
    if solver is None:
        solver = BranchAndBound()
    start = time.monotonic()
    result = solver.solve(
        SolveRequest(program=program, time_limit=config.total_time, mode=SolveMode.OPTIMIZE)
    )
    elapsed = time.monotonic() - start
    if not result.status.has_solution or result.solution is None:
        raise SolverOnlyFailedError(
            f"no feasible solution in budget (status: {result.status.value}"
            + (f"; {result.message}" if result.message else "")
            + ")"
        )
    incumbent = Assignment.make(program, result.solution)
    event = TraceEvent(
        iteration=1,
        wall_clock=elapsed,
        k=1,
        block=0,
        free_var_count=program.n_variables,
        sub_status=result.status.value,
        objective_before=incumbent.objective_value,
        objective_after=incumbent.objective_value,
        accepted=True,
        stall_count=0,
    )
    return RunResult(
        incumbent=incumbent,
        trace=[event],
        proven_optimal=result.status is SolveStatus.OPTIMAL,
        elapsed=elapsed,
        final_k=1,
    )
