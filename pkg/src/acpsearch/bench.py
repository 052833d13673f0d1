"""Benchmark harness: instance x algorithm x repetition matrices with
mean +/- sample-std aggregation, per-run artifacts, and named presets.

Presets `paper-small`, `paper-medium` and `paper-large` carry the published
per-family settings (initial block count, stall threshold and window, and the
per-iteration time fraction) for each algorithm; `desk` is the workstation
profile used by the acceptance experiments (small-profile settings, 60 s).
"""

from __future__ import annotations

import concurrent.futures
import json
import logging
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import generators, instance_io
from .driver import Algorithm, Repartition, RunConfig, RunResult, run
from .external import ExternalSolver, ExternalSolverConfig
from .initial import Family
from .subsolver import BranchAndBound
from .trace import write_trace_csv

log = logging.getLogger(__name__)

# Per (family, algorithm): k0, epsilon, t, p, and the family's time budget.
# LNS has no stall rule, so epsilon/t are None for it.
PRESETS: dict[str, dict[str, dict[str, dict]]] = {
    "paper-small": {
        "is": {
            "lns": dict(k0=2, p=0.1, time=10.0),
            "acp": dict(k0=6, epsilon=0.002, t=3, p=0.1, time=10.0),
            "acp2": dict(k0=4, epsilon=0.01, t=3, p=0.2, time=10.0),
            "solver_only": dict(time=10.0),
        },
        "mvc": {
            "lns": dict(k0=3, p=0.1, time=10.0),
            "acp": dict(k0=5, epsilon=0.002, t=3, p=0.1, time=10.0),
            "acp2": dict(k0=4, epsilon=0.01, t=3, p=0.2, time=10.0),
            "solver_only": dict(time=10.0),
        },
        "maxcut": {
            "lns": dict(k0=2, p=0.3, time=10.0),
            "acp": dict(k0=3, epsilon=0.1, t=3, p=0.2, time=10.0),
            "acp2": dict(k0=2, epsilon=0.01, t=3, p=0.3, time=10.0),
            "solver_only": dict(time=10.0),
        },
        "sc": {
            "lns": dict(k0=4, p=0.2, time=20.0),
            "acp": dict(k0=10, epsilon=0.002, t=3, p=0.2, time=20.0),
            "acp2": dict(k0=10, epsilon=0.01, t=3, p=0.2, time=20.0),
            "solver_only": dict(time=20.0),
        },
    },
    "paper-medium": {
        "is": {
            "lns": dict(k0=6, p=0.1, time=100.0),
            "acp": dict(k0=8, epsilon=0.1, t=3, p=0.1, time=100.0),
            "acp2": dict(k0=8, epsilon=0.01, t=3, p=0.2, time=100.0),
            "solver_only": dict(time=100.0),
        },
        "mvc": {
            "lns": dict(k0=6, p=0.1, time=100.0),
            "acp": dict(k0=8, epsilon=0.002, t=3, p=0.1, time=100.0),
            "acp2": dict(k0=8, epsilon=0.01, t=3, p=0.2, time=100.0),
            "solver_only": dict(time=100.0),
        },
        "maxcut": {
            "lns": dict(k0=4, p=0.1, time=180.0),
            "acp": dict(k0=6, epsilon=0.1, t=3, p=0.1, time=180.0),
            "acp2": dict(k0=6, epsilon=0.01, t=3, p=0.1, time=180.0),
            "solver_only": dict(time=180.0),
        },
        "sc": {
            "lns": dict(k0=6, p=0.2, time=100.0),
            "acp": dict(k0=12, epsilon=0.002, t=3, p=0.2, time=100.0),
            "acp2": dict(k0=12, epsilon=0.01, t=3, p=0.2, time=100.0),
            "solver_only": dict(time=100.0),
        },
    },
    "paper-large": {
        "is": {
            "lns": dict(k0=8, p=0.1, time=1500.0),
            "acp": dict(k0=10, epsilon=0.1, t=3, p=0.1, time=1500.0),
            "acp2": dict(k0=10, epsilon=0.01, t=3, p=0.1, time=1500.0),
            "solver_only": dict(time=1500.0),
        },
        "mvc": {
            "lns": dict(k0=8, p=0.1, time=1500.0),
            "acp": dict(k0=10, epsilon=0.002, t=3, p=0.1, time=1500.0),
            "acp2": dict(k0=10, epsilon=0.01, t=3, p=0.1, time=1500.0),
            "solver_only": dict(time=1500.0),
        },
        "maxcut": {
            "lns": dict(k0=15, p=0.1, time=1800.0),
            "acp": dict(k0=15, epsilon=0.1, t=3, p=0.1, time=1800.0),
            "acp2": dict(k0=15, epsilon=0.01, t=3, p=0.1, time=1800.0),
            "solver_only": dict(time=1800.0),
        },
        "sc": {
            "lns": dict(k0=20, p=0.2, time=500.0),
            "acp": dict(k0=25, epsilon=0.002, t=3, p=0.2, time=500.0),
            "acp2": dict(k0=25, epsilon=0.01, t=3, p=0.2, time=500.0),
            "solver_only": dict(time=500.0),
        },
    },
}

# Desk profile: small-profile settings at a flat 60 s budget.
PRESETS["desk"] = {
    family: {algo: {**cfg, "time": 60.0} for algo, cfg in algos.items()}
    for family, algos in PRESETS["paper-small"].items()
}

# Published instance shapes per profile (family keyword arguments minus seed).
PRESET_INSTANCES: dict[str, dict[str, dict]] = {
    "paper-small": {
        "is": dict(nodes=10_000, edges=30_000),
        "mvc": dict(nodes=10_000, edges=30_000),
        "maxcut": dict(nodes=10_000, edges=30_000),
        "sc": dict(items=20_000, sets=20_000, coverage=4),
    },
    "paper-medium": {
        "is": dict(nodes=100_000, edges=300_000),
        "mvc": dict(nodes=100_000, edges=300_000),
        "maxcut": dict(nodes=100_000, edges=300_000),
        "sc": dict(items=200_000, sets=200_000, coverage=4),
    },
    "paper-large": {
        "is": dict(nodes=1_000_000, edges=3_000_000),
        "mvc": dict(nodes=1_000_000, edges=3_000_000),
        "maxcut": dict(nodes=1_000_000, edges=3_000_000),
        "sc": dict(items=200_000, sets=200_000, coverage=4),
    },
    "desk": {
        "is": dict(nodes=1_000, edges=3_000),
        "mvc": dict(nodes=1_000, edges=3_000),
        "maxcut": dict(nodes=1_000, edges=3_000),
        "sc": dict(items=2_000, sets=2_000, coverage=4),
    },
}


def preset_config(preset: str, family: str, algorithm: Algorithm, seed: int = 0) -> RunConfig:
    try:
        entry = PRESETS[preset][family][algorithm.value]
    except KeyError as exc:
        raise ValueError(f"no preset for ({preset!r}, {family!r}, {algorithm.value!r})") from exc
    return RunConfig(
        total_time=entry["time"],
        algorithm=algorithm,
        k0=entry.get("k0", 1),
        epsilon=entry.get("epsilon", 0.01),
        t=entry.get("t", 3),
        p=entry.get("p", 0.1),
        seed=seed,
    )


@dataclass
class InstanceEntry:
    """One instance: either a generator spec or an existing file path."""

    family: str | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    path: str | None = None
    label: str | None = None

    def resolve(self, workdir: Path) -> tuple[str, Path]:
        if self.path is not None:
            p = Path(self.path)
            if not p.exists():
                raise FileNotFoundError(f"instance file {p} does not exist")
            return self.label or p.stem, p
        program, meta = generators.generate(self.family, seed=self.seed, **self.params)
        label = self.label or program.name
        out = workdir / f"{label}.json"
        if not out.exists():
            instance_io.write_instance(out, program, meta)
        return label, out


@dataclass
class AlgorithmEntry:
    algorithm: Algorithm
    label: str | None = None
    preset: str | None = None
    overrides: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.label or self.algorithm.value


@dataclass
class BenchSpec:
    instances: list[InstanceEntry]
    algorithms: list[AlgorithmEntry]
    repetitions: int = 5
    base_seed: int = 0
    paired_seeds: bool = False  # run seed follows the instance seed
    time: float | None = None  # overrides preset/default budgets
    out_dir: str = "bench_out"
    workers: int = 1
    solver_command: str | None = None
    solver_parser: str = "name_value"

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")

    @classmethod
    def from_json(cls, path) -> "BenchSpec":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        instances = [
            InstanceEntry(
                family=item.get("family"),
                params={
                    k: v for k, v in item.items() if k not in ("family", "seed", "path", "label")
                },
                seed=int(item.get("seed", 0)),
                path=item.get("path"),
                label=item.get("label"),
            )
            for item in doc["instances"]
        ]
        algorithms = [
            AlgorithmEntry(
                algorithm=Algorithm(item["algo"]),
                label=item.get("label"),
                preset=item.get("preset"),
                overrides={
                    k: v for k, v in item.items() if k not in ("algo", "label", "preset")
                },
            )
            for item in doc["algorithms"]
        ]
        return cls(
            instances=instances,
            algorithms=algorithms,
            repetitions=int(doc.get("repetitions", 5)),
            base_seed=int(doc.get("base_seed", 0)),
            paired_seeds=bool(doc.get("paired_seeds", False)),
            time=doc.get("time"),
            out_dir=doc.get("out_dir", "bench_out"),
            workers=int(doc.get("workers", 1)),
            solver_command=doc.get("solver_command"),
            solver_parser=doc.get("solver_parser", "name_value"),
        )


@dataclass
class CellResult:
    instance: str
    algorithm: str
    rep: int
    seed: int
    objective: float | None = None
    elapsed: float = 0.0
    iterations: int = 0
    final_k: int | None = None
    proven_optimal: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.objective is not None


@dataclass
class SummaryRow:
    instance: str
    algorithm: str
    runs: int
    failures: int
    mean: float | None
    std: float | None
    best: float | None
    worst: float | None
    mean_final_k: float | None
    mean_iterations: float | None


SUMMARY_FIELDS = (
    "instance",
    "algorithm",
    "runs",
    "failures",
    "mean",
    "std",
    "best",
    "worst",
    "mean_final_k",
    "mean_iterations",
)


def _build_config(
    entry: AlgorithmEntry, family: str, seed: int, spec: BenchSpec
) -> RunConfig:
    if entry.preset:
        config = preset_config(entry.preset, family, entry.algorithm, seed)
    else:
        config = RunConfig(total_time=spec.time or 10.0, algorithm=entry.algorithm, seed=seed)
    updates = dict(entry.overrides)
    if spec.time is not None:
        updates["total_time"] = spec.time
    if "time" in updates:
        updates["total_time"] = updates.pop("time")
    if "repartition" in updates and not isinstance(updates["repartition"], Repartition):
        updates["repartition"] = Repartition(updates["repartition"])
    config = replace(config, seed=seed, **updates)
    return config


def run_cell(
    instance_label: str,
    instance_path,
    entry: AlgorithmEntry,
    config: RunConfig,
    spec: BenchSpec,
    rep: int,
) -> CellResult:
    cell = CellResult(
        instance=instance_label, algorithm=entry.name, rep=rep, seed=config.seed
    )
    run_dir = Path(spec.out_dir) / "runs" / f"{instance_label}__{entry.name}__r{rep}"
    try:
        program, meta = instance_io.read_instance(instance_path)
        family = Family(meta.get("family", "generic"))
        if spec.solver_command:
            solver = ExternalSolver(
                ExternalSolverConfig(command=spec.solver_command, parser=spec.solver_parser)
            )
        else:
            solver = BranchAndBound()
        result: RunResult = run(program, config, solver=solver, family=family)
        cell.objective = result.incumbent.objective_value
        cell.elapsed = result.elapsed
        cell.iterations = len(result.trace)
        cell.final_k = result.final_k
        cell.proven_optimal = result.proven_optimal
        run_dir.mkdir(parents=True, exist_ok=True)
        write_trace_csv(run_dir / "trace.csv", result.trace)
        (run_dir / "result.json").write_text(
            json.dumps(
                {
                    "instance": instance_label,
                    "algorithm": entry.name,
                    "rep": rep,
                    "seed": config.seed,
                    "objective": cell.objective,
                    "elapsed": cell.elapsed,
                    "iterations": cell.iterations,
                    "final_k": cell.final_k,
                    "proven_optimal": cell.proven_optimal,
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
    except Exception as exc:  # individual failures become failed cells
        log.warning("run %s/%s rep %d failed: %s", instance_label, entry.name, rep, exc)
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def run_bench(spec: BenchSpec) -> tuple[list[CellResult], list[SummaryRow]]:
    out_dir = Path(spec.out_dir)
    instances_dir = out_dir / "instances"
    instances_dir.mkdir(parents=True, exist_ok=True)

    resolved: list[tuple[str, Path, str | None]] = []
    for inst in spec.instances:
        label, path = inst.resolve(instances_dir)
        resolved.append((label, path, inst.family))

    jobs = []
    for label, path, family in resolved:
        _, meta = instance_io.read_instance(path)
        fam = meta.get("family", family or "generic")
        for entry in spec.algorithms:
            for rep in range(spec.repetitions):
                if spec.paired_seeds:
                    seed = int(meta.get("seed", 0)) + rep
                else:
                    seed = spec.base_seed + rep
                config = _build_config(entry, fam, seed, spec)
                jobs.append((label, path, entry, config, rep))

    cells: list[CellResult] = []
    if spec.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [
                pool.submit(run_cell, label, path, entry, config, spec, rep)
                for label, path, entry, config, rep in jobs
            ]
            cells = [f.result() for f in futures]
    else:
        for label, path, entry, config, rep in jobs:
            cells.append(run_cell(label, path, entry, config, spec, rep))

    summary = summarize(cells)
    write_summary_csv(out_dir / "summary.csv", summary)
    return cells, summary


def summarize(cells: list[CellResult]) -> list[SummaryRow]:
    groups: dict[tuple[str, str], list[CellResult]] = {}
    for cell in cells:
        groups.setdefault((cell.instance, cell.algorithm), []).append(cell)
    rows: list[SummaryRow] = []
    for (instance, algorithm), group in sorted(groups.items()):
        ok = [c for c in group if c.ok]
        objs = [c.objective for c in ok]
        rows.append(
            SummaryRow(
                instance=instance,
                algorithm=algorithm,
                runs=len(group),
                failures=len(group) - len(ok),
                mean=statistics.fmean(objs) if objs else None,
                std=statistics.stdev(objs) if len(objs) >= 2 else (0.0 if objs else None),
                best=max(objs) if objs else None,
                worst=min(objs) if objs else None,
                mean_final_k=(
                    statistics.fmean([c.final_k for c in ok if c.final_k is not None])
                    if any(c.final_k is not None for c in ok)
                    else None
                ),
                mean_iterations=statistics.fmean([c.iterations for c in ok]) if ok else None,
            )
        )
    return rows


def write_summary_csv(path, rows: list[SummaryRow]) -> None:
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_FIELDS)
        for row in rows:
            writer.writerow(
                ["" if getattr(row, f) is None else getattr(row, f) for f in SUMMARY_FIELDS]
            )


def format_grid(rows: list[SummaryRow], senses: dict[str, str] | None = None) -> str:
    """Human-readable mean +/- std grid; best algorithm per instance marked."""
    by_instance: dict[str, list[SummaryRow]] = {}
    for row in rows:
        by_instance.setdefault(row.instance, []).append(row)
    lines = []
    header = f"{'instance':<30} {'algorithm':<14} {'objective':>24} {'runs':>5}"
    lines.append(header)
    lines.append("-" * len(header))
    for instance, group in sorted(by_instance.items()):
        sense = (senses or {}).get(instance, "max")
        valid = [r for r in group if r.mean is not None]
        best_mean = None
        if valid:
            best_mean = max(v.mean for v in valid) if sense == "max" else min(v.mean for v in valid)
        for row in group:
            if row.mean is None:
                cell = "failed"
            else:
                cell = f"{row.mean:.2f} +/- {row.std:.2f}" if row.std is not None else f"{row.mean:.2f}"
                if best_mean is not None and row.mean == best_mean:
                    cell += " *"
            lines.append(f"{instance:<30} {row.algorithm:<14} {cell:>24} {row.runs:>5}")
    return "\n".join(lines)
