"""Trace serialization (CSV and JSON-lines) and the objective-vs-time
report: per-trace step series aligned onto a common time grid for plotting."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .driver import TRACE_FIELDS, TraceEvent


def write_trace_csv(path, events: list[TraceEvent]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        for e in events:
            writer.writerow([getattr(e, f) for f in TRACE_FIELDS])


def read_trace_csv(path) -> list[TraceEvent]:
    events: list[TraceEvent] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != list(TRACE_FIELDS):
            raise ValueError(f"{path}: line 1: unexpected trace header {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                events.append(
                    TraceEvent(
                        iteration=int(row["iteration"]),
                        wall_clock=float(row["wall_clock"]),
                        k=int(row["k"]),
                        block=int(row["block"]),
                        free_var_count=int(row["free_var_count"]),
                        sub_status=row["sub_status"],
                        objective_before=float(row["objective_before"]),
                        objective_after=float(row["objective_after"]),
                        accepted=row["accepted"] in ("True", "true", "1"),
                        stall_count=int(row["stall_count"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {lineno}: malformed trace row ({exc})") from exc
    return events


def write_trace_jsonl(path, events: list[TraceEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in events:
            fh.write(json.dumps({f: getattr(e, f) for f in TRACE_FIELDS}, sort_keys=True))
            fh.write("\n")


def read_trace_jsonl(path) -> list[TraceEvent]:
    events: list[TraceEvent] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                events.append(TraceEvent(**{f: doc[f] for f in TRACE_FIELDS}))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {lineno}: malformed trace row ({exc})") from exc
    return events


def series_from_events(events: list[TraceEvent]) -> list[tuple[float, float]]:
    """Best-objective-so-far step anchors: one point per event."""
    return [(e.wall_clock, e.objective_after) for e in events]


def aligned_report(named_series: dict[str, list[tuple[float, float]]]) -> tuple[list[float], dict[str, list[float | None]]]:
    """Align step series onto the union time grid (run start included).

    A series has a value only from its first completed iteration onward;
    earlier grid cells are None.  Values carry forward to the common horizon,
    so a single-event trace yields a start row and an end row.
    """
    grid: set[float] = {0.0}
    for points in named_series.values():
        grid.update(t for t, _ in points)
    times = sorted(grid)
    columns: dict[str, list[float | None]] = {}
    for name, points in named_series.items():
        col: list[float | None] = []
        for t in times:
            value: float | None = None
            for pt, pv in points:
                if pt <= t:
                    value = pv
                else:
                    break
            col.append(value)
        columns[name] = col
    return times, columns


def write_report_csv(path, traces: dict[str, list[TraceEvent]]) -> None:
    named = {name: series_from_events(events) for name, events in traces.items()}
    times, columns = aligned_report(named)
    names = list(traces.keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time"] + names)
        for row, t in enumerate(times):
            writer.writerow([t] + [_cell(columns[name][row]) for name in names])


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)
