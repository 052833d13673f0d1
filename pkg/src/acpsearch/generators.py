"""Seeded generators for the four benchmark families: independent set,
vertex cover, max-cut and set cover.

Graphs are uniform simple graphs G(n, m): exactly ``edges`` distinct
unordered pairs sampled without replacement.  All generated variables are
binary, and identical specs (including the seed) produce identical programs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Comparator, IntegerProgram, LinearConstraint, Sense, VariableDef


@dataclass(frozen=True)
class GraphSpec:
    nodes: int
    edges: int
    seed: int

    def __post_init__(self) -> None:
        if self.nodes < 1:
            raise ValueError("nodes must be >= 1")
        if self.edges < 0:
            raise ValueError("edges must be >= 0")
        cap = self.nodes * (self.nodes - 1) // 2
        if self.edges > cap:
            raise ValueError(f"{self.edges} edges exceeds the simple-graph maximum {cap}")


@dataclass(frozen=True)
class SetCoverSpec:
    items: int
    sets: int
    coverage: int
    seed: int

    def __post_init__(self) -> None:
        if self.items < 1 or self.sets < 1:
            raise ValueError("items and sets must be >= 1")
        if self.coverage < 1:
            raise ValueError("coverage must be >= 1")
        if self.coverage > self.sets:
            raise ValueError(f"coverage {self.coverage} exceeds set count {self.sets}")


def gen_graph(spec: GraphSpec) -> list[tuple[int, int]]:
    """Sample ``spec.edges`` distinct edges uniformly, in first-drawn order."""
    n, m = spec.nodes, spec.edges
    rng = np.random.default_rng(spec.seed)
    cap = n * (n - 1) // 2
    if m == cap:
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges: list[tuple[int, int]] = []
    seen: set[int] = set()
    while len(edges) < m:
        draw = rng.integers(0, n, size=2 * max(64, m - len(edges)))
        for idx in range(0, len(draw) - 1, 2):
            u = int(draw[idx])
            v = int(draw[idx + 1])
            if u == v:
                continue
            if u > v:
                u, v = v, u
            code = u * n + v
            if code in seen:
                continue
            seen.add(code)
            edges.append((u, v))
            if len(edges) == m:
                break
    return edges


def _binary_vars(names) -> tuple[VariableDef, ...]:
    return tuple(VariableDef(name=nm, lower=0.0, upper=1.0, integral=True) for nm in names)


def gen_is(spec: GraphSpec) -> IntegerProgram:
    """Maximum independent set: maximize sum(x_v), x_u + x_v <= 1 per edge."""
    edges = gen_graph(spec)
    constraints = tuple(
        LinearConstraint(((u, 1.0), (v, 1.0)), Comparator.LE, 1.0) for u, v in edges
    )
    return IntegerProgram(
        variables=_binary_vars(f"x{v}" for v in range(spec.nodes)),
        constraints=constraints,
        objective=tuple((v, 1.0) for v in range(spec.nodes)),
        sense=Sense.MAXIMIZE,
        name=f"is-n{spec.nodes}-m{spec.edges}-s{spec.seed}",
    )


def gen_mvc(spec: GraphSpec) -> IntegerProgram:
    """Minimum vertex cover: minimize sum(x_v), x_u + x_v >= 1 per edge."""
    edges = gen_graph(spec)
    constraints = tuple(
        LinearConstraint(((u, 1.0), (v, 1.0)), Comparator.GE, 1.0) for u, v in edges
    )
    return IntegerProgram(
        variables=_binary_vars(f"x{v}" for v in range(spec.nodes)),
        constraints=constraints,
        objective=tuple((v, 1.0) for v in range(spec.nodes)),
        sense=Sense.MINIMIZE,
        name=f"mvc-n{spec.nodes}-m{spec.edges}-s{spec.seed}",
    )


def gen_maxcut(spec: GraphSpec) -> IntegerProgram:
    """Maximum cut, linearized: side variables x_v plus one cut indicator y_e
    per edge, with y_e <= x_u + x_v and y_e <= 2 - x_u - x_v."""
    edges = gen_graph(spec)
    n = spec.nodes
    names = [f"x{v}" for v in range(n)]
    names += [f"y{u}_{v}" for u, v in edges]
    constraints: list[LinearConstraint] = []
    for e, (u, v) in enumerate(edges):
        ye = n + e
        constraints.append(
            LinearConstraint(((ye, 1.0), (u, -1.0), (v, -1.0)), Comparator.LE, 0.0)
        )
        constraints.append(
            LinearConstraint(((ye, 1.0), (u, 1.0), (v, 1.0)), Comparator.LE, 2.0)
        )
    return IntegerProgram(
        variables=_binary_vars(names),
        constraints=tuple(constraints),
        objective=tuple((n + e, 1.0) for e in range(len(edges))),
        sense=Sense.MAXIMIZE,
        name=f"maxcut-n{spec.nodes}-m{spec.edges}-s{spec.seed}",
    )


def _sample_distinct(rng: np.random.Generator, n: int, k: int) -> list[int]:
    # Rejection for k << n, permutation prefix otherwise; both seed-stable.
    if k > n // 2:
        return [int(v) for v in rng.permutation(n)[:k]]
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < k:
        v = int(rng.integers(0, n))
        if v not in seen:
            seen.add(v)
            chosen.append(v)
    return chosen


def gen_sc(spec: SetCoverSpec) -> IntegerProgram:
    """Minimum set cover: each item is placed into exactly ``coverage``
    distinct sets chosen uniformly at random; minimize the sets used."""
    rng = np.random.default_rng(spec.seed)
    constraints = []
    for _ in range(spec.items):
        covers = _sample_distinct(rng, spec.sets, spec.coverage)
        constraints.append(
            LinearConstraint(tuple((j, 1.0) for j in sorted(covers)), Comparator.GE, 1.0)
        )
    return IntegerProgram(
        variables=_binary_vars(f"s{j}" for j in range(spec.sets)),
        constraints=tuple(constraints),
        objective=tuple((j, 1.0) for j in range(spec.sets)),
        sense=Sense.MINIMIZE,
        name=f"sc-i{spec.items}-s{spec.sets}-c{spec.coverage}-seed{spec.seed}",
    )


def generate(family: str, **params) -> tuple[IntegerProgram, dict]:
    """Build an instance by family name; returns (program, provenance metadata)."""
    family = family.lower()
    if family in ("is", "mvc", "maxcut"):
        spec = GraphSpec(nodes=params["nodes"], edges=params["edges"], seed=params["seed"])
        program = {"is": gen_is, "mvc": gen_mvc, "maxcut": gen_maxcut}[family](spec)
        meta = {"family": family, "nodes": spec.nodes, "edges": spec.edges, "seed": spec.seed}
    elif family == "sc":
        spec = SetCoverSpec(
            items=params["items"],
            sets=params["sets"],
            coverage=params["coverage"],
            seed=params["seed"],
        )
        program = gen_sc(spec)
        meta = {
            "family": "sc",
            "items": spec.items,
            "sets": spec.sets,
            "coverage": spec.coverage,
            "seed": spec.seed,
        }
    else:
        raise ValueError(f"unknown family {family!r} (expected is, mvc, maxcut or sc)")
    return program, meta
