"""Command-line entry point: generate instances, run a single solve, run a
benchmark matrix, or turn traces into plot-ready objective-vs-time CSV.

Exit codes: 0 success, 1 usage error, 2 run failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench, generators, instance_io, lp_format, trace
from .driver import Algorithm, Repartition, RunConfig, SolverOnlyFailedError, run
from .external import ExternalSolver, ExternalSolverConfig
from .initial import Family, NoInitialSolutionError
from .subsolver import BranchAndBound, SolveMode, SolveRequest

USAGE_ERROR = 1
RUN_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; keep 1 for usage
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acpsearch", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a benchmark instance as JSON")
    gen.add_argument("family", choices=["is", "mvc", "maxcut", "sc"])
    gen.add_argument("--nodes", type=int, help="graph families: node count")
    gen.add_argument("--edges", type=int, help="graph families: edge count")
    gen.add_argument("--items", type=int, help="sc: item count")
    gen.add_argument("--sets", type=int, help="sc: set count")
    gen.add_argument("--coverage", type=int, default=4, help="sc: sets per item")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", required=True, help="output instance path")

    solve = sub.add_parser("solve", help="run one algorithm on one instance")
    solve.add_argument("instance", help="instance JSON path")
    solve.add_argument(
        "--algo", choices=[a.value for a in Algorithm], default="acp"
    )
    solve.add_argument("--time", type=float, default=None, help="total budget in seconds")
    solve.add_argument("--k0", type=int, default=None, help="initial block count")
    solve.add_argument("--eps", type=float, default=None, help="stall threshold")
    solve.add_argument("--t", type=int, default=None, help="stalls before k drops")
    solve.add_argument("--p", type=float, default=None, help="per-iteration time fraction")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--preset", choices=sorted(bench.PRESETS.keys()))
    solve.add_argument("--solver", choices=["builtin", "external"], default="builtin")
    solve.add_argument(
        "--solver-cmd",
        help="external command template with {lp_file} {time_limit_s} {sol_file}",
    )
    solve.add_argument(
        "--solver-parser", choices=["name_value", "gurobi_sol"], default="name_value"
    )
    solve.add_argument(
        "--repartition", choices=[r.value for r in Repartition], default="every"
    )
    solve.add_argument("--max-iters", type=int, default=None)
    solve.add_argument("--out", default="run_out", help="output directory")

    bench_cmd = sub.add_parser("bench", help="run a benchmark spec file")
    bench_cmd.add_argument("spec", help="bench spec JSON path")
    bench_cmd.add_argument("--out", default=None, help="override the spec's out_dir")
    bench_cmd.add_argument("--workers", type=int, default=None)
    bench_cmd.add_argument(
        "--serial", action="store_true", help="one run at a time (honest wall-clock)"
    )

    report = sub.add_parser("report", help="objective-vs-time CSV from traces")
    report.add_argument("traces", nargs="+", help="trace CSV files")
    report.add_argument("-o", "--out", required=True, help="output CSV path")

    lpsolve = sub.add_parser(
        "solve-lp", help="solve a CPLEX-LP file with the built-in solver"
    )
    lpsolve.add_argument("lp_file")
    lpsolve.add_argument("--time", type=float, default=10.0)
    lpsolve.add_argument("--sol", required=True, help="write `name value` lines here")
    lpsolve.add_argument(
        "--feasibility-only", action="store_true", help="stop at the first feasible point"
    )
    return parser


def _cmd_generate(args) -> int:
    params: dict = {}
    if args.family in ("is", "mvc", "maxcut"):
        if args.nodes is None or args.edges is None:
            print("generate: --nodes and --edges are required for graph families", file=sys.stderr)
            return USAGE_ERROR
        params = dict(nodes=args.nodes, edges=args.edges)
    else:
        if args.items is None or args.sets is None:
            print("generate: --items and --sets are required for sc", file=sys.stderr)
            return USAGE_ERROR
        params = dict(items=args.items, sets=args.sets, coverage=args.coverage)
    try:
        program, meta = generators.generate(args.family, seed=args.seed, **params)
    except ValueError as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return RUN_FAILURE
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    instance_io.write_instance(out, program, meta)
    print(f"wrote {out} ({program.n_variables} variables, {program.n_constraints} constraints)")
    return 0


def _cmd_solve(args) -> int:
    try:
        program, meta = instance_io.read_instance(args.instance)
    except ValueError as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return RUN_FAILURE
    family_name = meta.get("family", "generic")
    try:
        family = Family(family_name)
    except ValueError:
        family = Family.GENERIC

    algorithm = Algorithm(args.algo)
    if args.preset:
        try:
            config = bench.preset_config(args.preset, family_name, algorithm, args.seed)
        except ValueError as exc:
            print(f"solve: {exc}", file=sys.stderr)
            return USAGE_ERROR
    else:
        config = RunConfig(
            total_time=args.time if args.time is not None else 10.0,
            algorithm=algorithm,
            seed=args.seed,
        )
    # CLI flags override preset values.
    updates = dict(
        algorithm=algorithm,
        seed=args.seed,
        repartition=Repartition(args.repartition),
        max_iterations=args.max_iters,
    )
    if args.time is not None:
        updates["total_time"] = args.time
    if args.k0 is not None:
        updates["k0"] = args.k0
    if args.eps is not None:
        updates["epsilon"] = args.eps
    if args.t is not None:
        updates["t"] = args.t
    if args.p is not None:
        updates["p"] = args.p
    try:
        config = replace(config, **updates)
    except ValueError as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return USAGE_ERROR

    if args.solver == "external":
        if not args.solver_cmd:
            print("solve: --solver external requires --solver-cmd", file=sys.stderr)
            return USAGE_ERROR
        solver = ExternalSolver(
            ExternalSolverConfig(command=args.solver_cmd, parser=args.solver_parser)
        )
    else:
        solver = BranchAndBound()

    try:
        result = run(program, config, solver=solver, family=family)
    except (NoInitialSolutionError, SolverOnlyFailedError) as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return RUN_FAILURE

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace.write_trace_csv(out_dir / "trace.csv", result.trace)
    (out_dir / "result.json").write_text(
        json.dumps(
            {
                "instance": str(args.instance),
                "objective": result.incumbent.objective_value,
                "feasible": result.incumbent.feasible,
                "proven_optimal": result.proven_optimal,
                "elapsed": result.elapsed,
                "iterations": len(result.trace),
                "final_k": result.final_k,
                "config": {
                    "algorithm": config.algorithm.value,
                    "total_time": config.total_time,
                    "k0": config.k0,
                    "epsilon": config.epsilon,
                    "t": config.t,
                    "p": config.p,
                    "seed": config.seed,
                    "repartition": config.repartition.value,
                },
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    print(result.incumbent.objective_value)
    return 0


def _cmd_bench(args) -> int:
    try:
        spec = bench.BenchSpec.from_json(args.spec)
    except (OSError, ValueError, KeyError) as exc:
        print(f"bench: cannot read spec: {exc}", file=sys.stderr)
        return RUN_FAILURE
    if args.out:
        spec.out_dir = args.out
    if args.serial:
        spec.workers = 1
    elif args.workers is not None:
        spec.workers = args.workers
    cells, summary = bench.run_bench(spec)
    senses = {}
    for inst in spec.instances:
        try:
            label, path = inst.resolve(Path(spec.out_dir) / "instances")
            program, _ = instance_io.read_instance(path)
            senses[label] = "max" if program.sense.value == "maximize" else "min"
        except Exception:
            pass
    print(bench.format_grid(summary, senses))
    print(f"\nsummary written to {Path(spec.out_dir) / 'summary.csv'}")
    return 0


def _cmd_report(args) -> int:
    traces = {}
    for path in args.traces:
        name = Path(path).stem
        if name == "trace":
            name = Path(path).parent.name or name
        base = name
        suffix = 2
        while name in traces:
            name = f"{base}_{suffix}"
            suffix += 1
        try:
            traces[name] = trace.read_trace_csv(path)
        except (OSError, ValueError) as exc:
            print(f"report: {exc}", file=sys.stderr)
            return RUN_FAILURE
    trace.write_report_csv(args.out, traces)
    print(f"wrote {args.out}")
    return 0


def _cmd_solve_lp(args) -> int:
    try:
        program = lp_format.read_lp(args.lp_file)
    except (OSError, ValueError) as exc:
        print(f"solve-lp: {exc}", file=sys.stderr)
        return RUN_FAILURE
    mode = SolveMode.FEASIBILITY_FIRST if args.feasibility_only else SolveMode.OPTIMIZE
    result = BranchAndBound().solve(
        SolveRequest(program=program, time_limit=args.time, mode=mode)
    )
    if result.solution is None:
        print(f"solve-lp: no solution ({result.status.value})", file=sys.stderr)
        return RUN_FAILURE
    lines = [
        f"{var.name} {value}"
        for var, value in zip(program.variables, result.solution)
    ]
    Path(args.sol).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(result.objective)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "report": _cmd_report,
        "solve-lp": _cmd_solve_lp,
    }
    try:
        return handlers[args.command](args)
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return RUN_FAILURE


if __name__ == "__main__":
    sys.exit(main())
