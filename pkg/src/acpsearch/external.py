"""Adapter that shells out to any external solver via CPLEX-LP interchange.

The command template is split with shlex and placeholders `{lp_file}`,
`{time_limit_s}` and `{sol_file}` are substituted per token, so no shell is
involved.  The subprocess is killed at the time limit plus 10% grace.  A
solver failure never propagates: it comes back as a SolverError result and
the driver keeps its incumbent.
"""

from __future__ import annotations

import logging
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .lp_format import write_lp
from .model import check_feasibility, evaluate_objective
from .subsolver import SolveRequest, SolveResult, SolveStatus

log = logging.getLogger(__name__)

_EXCERPT = 500


@dataclass
class ExternalSolverConfig:
    command: str
    workdir: str | None = None
    parser: str = "name_value"  # or "gurobi_sol"

    def __post_init__(self) -> None:
        if self.parser not in ("name_value", "gurobi_sol"):
            raise ValueError(f"unknown solution parser {self.parser!r}")


def parse_solution_file(text: str) -> dict[str, float]:
    """Parse `name value` lines; `#` comment lines (Gurobi .sol) are skipped."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace("=", " ").split()
        if len(parts) != 2:
            raise ValueError(f"solution line {lineno} is not `name value`: {raw!r}")
        values[parts[0]] = float(parts[1])
    return values


@dataclass
class ExternalSolver:
    config: ExternalSolverConfig

    def solve(self, request: SolveRequest) -> SolveResult:
        start = time.monotonic()
        program = request.program
        try:
            with tempfile.TemporaryDirectory(prefix="acpsearch-ext-") as tmp:
                lp_file = str(Path(tmp) / "problem.lp")
                sol_file = str(Path(tmp) / "solution.sol")
                write_lp(lp_file, program)
                argv = [
                    tok.format(
                        lp_file=lp_file,
                        time_limit_s=f"{request.time_limit:.3f}",
                        sol_file=sol_file,
                    )
                    for tok in shlex.split(self.config.command)
                ]
                timed_out = False
                try:
                    proc = subprocess.run(
                        argv,
                        cwd=self.config.workdir,
                        capture_output=True,
                        text=True,
                        timeout=request.time_limit * 1.1,
                    )
                except subprocess.TimeoutExpired:
                    timed_out = True
                    proc = None
                except OSError as exc:
                    return self._error(f"cannot run {argv[0]!r}: {exc}", start)

                if proc is not None and proc.returncode != 0:
                    excerpt = (proc.stderr or proc.stdout or "")[:_EXCERPT]
                    return self._error(
                        f"command exited with status {proc.returncode}: {excerpt}", start
                    )

                sol_path = Path(sol_file)
                if not sol_path.exists():
                    if timed_out:
                        return self._timeout_result(request, start)
                    return self._error("solver wrote no solution file", start)
                try:
                    by_name = parse_solution_file(sol_path.read_text(encoding="utf-8"))
                except ValueError as exc:
                    return self._error(f"unparsable solution file: {exc}", start)
        except OSError as exc:
            return self._error(f"interchange I/O failure: {exc}", start)

        values = self._assemble(request, by_name)
        if check_feasibility(program, values):
            return self._error("external solution violates the program", start)
        objective = evaluate_objective(program, values)
        if request.warm_start is not None:
            warm_obj = evaluate_objective(program, request.warm_start)
            if program.sense.better(warm_obj, objective):
                values = [float(v) for v in request.warm_start]
                objective = warm_obj
        return SolveResult(
            status=SolveStatus.FEASIBLE_TIME_LIMIT,
            solution=values,
            objective=objective,
            elapsed=time.monotonic() - start,
        )

    def _assemble(self, request: SolveRequest, by_name: dict[str, float]) -> list[float]:
        # Missing names fall back to the warm start (or the lower bound);
        # integral values are snapped to the nearest integer.
        program = request.program
        values: list[float] = []
        for idx, var in enumerate(program.variables):
            if var.name in by_name:
                v = by_name[var.name]
            elif request.warm_start is not None:
                v = request.warm_start[idx]
            else:
                v = var.lower
            if var.integral and abs(v - round(v)) <= 1e-6:
                v = float(round(v))
            values.append(float(v))
        return values

    def _timeout_result(self, request: SolveRequest, start: float) -> SolveResult:
        if request.warm_start is not None:
            return SolveResult(
                status=SolveStatus.FEASIBLE_TIME_LIMIT,
                solution=[float(v) for v in request.warm_start],
                objective=evaluate_objective(request.program, request.warm_start),
                elapsed=time.monotonic() - start,
                message="external solver killed at time limit; warm start retained",
            )
        return SolveResult(
            status=SolveStatus.NO_SOLUTION_TIME_LIMIT,
            elapsed=time.monotonic() - start,
            message="external solver killed at time limit with no solution file",
        )

    def _error(self, message: str, start: float) -> SolveResult:
        log.warning("external solver error: %s", message)
        return SolveResult(
            status=SolveStatus.SOLVER_ERROR,
            elapsed=time.monotonic() - start,
            message=message,
        )
