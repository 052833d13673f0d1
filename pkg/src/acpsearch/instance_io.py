"""Canonical JSON instance format: read/write with embedded provenance metadata.

The encoding is deterministic (sorted keys, fixed separators), so identical
programs and metadata always serialize to byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import Comparator, IntegerProgram, LinearConstraint, Sense, VariableDef


def instance_to_dict(program: IntegerProgram, metadata: dict | None = None) -> dict:
    doc = {
        "name": program.name,
        "sense": program.sense.value,
        "variables": [
            {"name": v.name, "lower": v.lower, "upper": v.upper, "integral": v.integral}
            for v in program.variables
        ],
        "objective": [[i, c] for i, c in program.objective],
        "constraints": [
            {"coeffs": [[i, c] for i, c in con.coeffs], "cmp": con.cmp.value, "rhs": con.rhs}
            for con in program.constraints
        ],
    }
    if metadata is not None:
        doc["metadata"] = metadata
    return doc


def instance_from_dict(doc: dict) -> tuple[IntegerProgram, dict]:
    variables = tuple(
        VariableDef(
            name=str(v["name"]),
            lower=float(v["lower"]),
            upper=float(v["upper"]),
            integral=bool(v["integral"]),
        )
        for v in doc["variables"]
    )
    constraints = tuple(
        LinearConstraint(
            coeffs=tuple((int(i), float(c)) for i, c in con["coeffs"]),
            cmp=Comparator(con["cmp"]),
            rhs=float(con["rhs"]),
        )
        for con in doc["constraints"]
    )
    program = IntegerProgram(
        variables=variables,
        constraints=constraints,
        objective=tuple((int(i), float(c)) for i, c in doc["objective"]),
        sense=Sense(doc["sense"]),
        name=str(doc.get("name", "")),
    )
    return program, dict(doc.get("metadata") or {})


def write_instance(path, program: IntegerProgram, metadata: dict | None = None) -> None:
    doc = instance_to_dict(program, metadata)
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_instance(path) -> tuple[IntegerProgram, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read instance file {path}: {exc}") from exc
    return instance_from_dict(doc)
