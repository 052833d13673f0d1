from __future__ import annotations

import numpy as np
import pytest

from acpsearch.generators import (
    GraphSpec,
    SetCoverSpec,
    gen_graph,
    gen_is,
    gen_maxcut,
    gen_mvc,
    gen_sc,
    generate,
)
from acpsearch.model import Comparator, Sense

from conftest import enumerate_optimum


class TestGraphSpec:
    def test_too_many_edges_rejected(self):
        with pytest.raises(ValueError):
            GraphSpec(nodes=4, edges=7, seed=0)

    def test_complete_graph_forced(self):
        edges = gen_graph(GraphSpec(nodes=4, edges=6, seed=5))
        assert sorted(edges) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_determinism(self):
        a = gen_graph(GraphSpec(nodes=50, edges=120, seed=9))
        b = gen_graph(GraphSpec(nodes=50, edges=120, seed=9))
        assert a == b

    def test_distinct_normalized_edges(self):
        edges = gen_graph(GraphSpec(nodes=1000, edges=3000, seed=2))
        assert len(edges) == 3000
        assert len(set(edges)) == 3000
        assert all(u < v for u, v in edges)


class TestIndependentSet:
    def test_path_graph_optimum(self):
        # Structure fixed by hand: path 0-1-2, optimum picks both endpoints.
        prog = gen_is(GraphSpec(nodes=3, edges=2, seed=1))
        assert prog.n_constraints == 2
        best = enumerate_optimum(prog)
        assert best is not None

    def test_known_edges_optimum_two(self):
        from acpsearch.model import IntegerProgram, LinearConstraint, VariableDef

        prog = IntegerProgram(
            variables=tuple(VariableDef(f"x{i}") for i in range(3)),
            constraints=(
                LinearConstraint(((0, 1.0), (1, 1.0)), Comparator.LE, 1.0),
                LinearConstraint(((1, 1.0), (2, 1.0)), Comparator.LE, 1.0),
            ),
            objective=tuple((i, 1.0) for i in range(3)),
            sense=Sense.MAXIMIZE,
        )
        obj, x = enumerate_optimum(prog)
        assert obj == 2.0
        assert x == (1.0, 0.0, 1.0)

    def test_no_edges(self):
        prog = gen_is(GraphSpec(nodes=2, edges=0, seed=0))
        assert prog.n_constraints == 0
        assert enumerate_optimum(prog)[0] == 2.0

    def test_structure(self):
        spec = GraphSpec(nodes=40, edges=100, seed=3)
        prog = gen_is(spec)
        assert prog.n_variables == 40
        assert prog.n_constraints == 100
        assert prog.sense is Sense.MAXIMIZE
        assert prog.all_binary
        assert all(c.cmp is Comparator.LE and c.rhs == 1.0 for c in prog.constraints)


class TestVertexCover:
    def test_path_graph(self):
        from acpsearch.model import IntegerProgram, LinearConstraint, VariableDef

        prog = IntegerProgram(
            variables=tuple(VariableDef(f"x{i}") for i in range(3)),
            constraints=(
                LinearConstraint(((0, 1.0), (1, 1.0)), Comparator.GE, 1.0),
                LinearConstraint(((1, 1.0), (2, 1.0)), Comparator.GE, 1.0),
            ),
            objective=tuple((i, 1.0) for i in range(3)),
            sense=Sense.MINIMIZE,
        )
        obj, x = enumerate_optimum(prog)
        assert obj == 1.0
        assert x == (0.0, 1.0, 0.0)

    def test_single_edge(self):
        prog = gen_mvc(GraphSpec(nodes=2, edges=1, seed=0))
        assert enumerate_optimum(prog)[0] == 1.0

    def test_is_mvc_complement_identity(self, rng):
        # optimal IS size + optimal MVC size == node count on any graph.
        for _ in range(12):
            n = int(rng.integers(3, 11))
            mmax = n * (n - 1) // 2
            m = int(rng.integers(0, min(mmax, 2 * n) + 1))
            seed = int(rng.integers(0, 10_000))
            spec = GraphSpec(nodes=n, edges=m, seed=seed)
            is_opt = enumerate_optimum(gen_is(spec))[0]
            mvc_opt = enumerate_optimum(gen_mvc(spec))[0]
            assert is_opt + mvc_opt == n


class TestMaxCut:
    def test_triangle_optimum_two(self):
        prog = gen_maxcut(GraphSpec(nodes=3, edges=3, seed=0))
        assert enumerate_optimum(prog)[0] == 2.0

    def test_single_edge(self):
        prog = gen_maxcut(GraphSpec(nodes=2, edges=1, seed=0))
        assert enumerate_optimum(prog)[0] == 1.0

    def test_bipartite_cuts_all_edges(self, rng):
        # Complete bipartite K_{2,3} built by hand has all 6 edges cuttable.
        from acpsearch.model import IntegerProgram

        spec = GraphSpec(nodes=5, edges=6, seed=1)
        prog = gen_maxcut(spec)
        edges = [(u, v) for u in (0, 1) for v in (2, 3, 4)]
        rebuilt = _maxcut_from_edges(5, edges)
        assert enumerate_optimum(rebuilt)[0] == len(edges)
        assert isinstance(prog, IntegerProgram)

    def test_structure(self):
        spec = GraphSpec(nodes=20, edges=50, seed=3)
        prog = gen_maxcut(spec)
        assert prog.n_variables == 20 + 50
        assert prog.n_constraints == 100
        assert prog.all_binary
        assert len(prog.objective) == 50


def _maxcut_from_edges(nodes, edges):
    from acpsearch.model import IntegerProgram, LinearConstraint, VariableDef

    names = [f"x{v}" for v in range(nodes)] + [f"y{u}_{v}" for u, v in edges]
    cons = []
    for e, (u, v) in enumerate(edges):
        ye = nodes + e
        cons.append(LinearConstraint(((ye, 1.0), (u, -1.0), (v, -1.0)), Comparator.LE, 0.0))
        cons.append(LinearConstraint(((ye, 1.0), (u, 1.0), (v, 1.0)), Comparator.LE, 2.0))
    return IntegerProgram(
        variables=tuple(VariableDef(nm) for nm in names),
        constraints=tuple(cons),
        objective=tuple((nodes + e, 1.0) for e in range(len(edges))),
        sense=Sense.MAXIMIZE,
    )


class TestSetCover:
    def test_two_items_two_sets_full_coverage(self):
        prog = gen_sc(SetCoverSpec(items=2, sets=2, coverage=2, seed=0))
        assert enumerate_optimum(prog)[0] == 1.0

    def test_coverage_equals_sets(self):
        prog = gen_sc(SetCoverSpec(items=5, sets=3, coverage=3, seed=1))
        assert all(len(c.coeffs) == 3 for c in prog.constraints)
        assert enumerate_optimum(prog)[0] == 1.0

    def test_coverage_exceeding_sets_rejected(self):
        with pytest.raises(ValueError):
            SetCoverSpec(items=5, sets=3, coverage=4, seed=0)

    def test_structure(self):
        prog = gen_sc(SetCoverSpec(items=200, sets=150, coverage=4, seed=9))
        assert prog.n_variables == 150
        assert prog.n_constraints == 200
        assert prog.sense is Sense.MINIMIZE
        assert prog.all_binary
        for con in prog.constraints:
            assert len(con.coeffs) == 4
            assert len({i for i, _ in con.coeffs}) == 4
            assert con.cmp is Comparator.GE and con.rhs == 1.0


class TestGenerate:
    def test_dispatch_and_metadata(self):
        prog, meta = generate("sc", items=10, sets=8, coverage=2, seed=4)
        assert meta == {"family": "sc", "items": 10, "sets": 8, "coverage": 2, "seed": 4}
        assert prog.n_variables == 8

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            generate("tsp", seed=0)

    def test_graph_metadata(self):
        _, meta = generate("is", nodes=5, edges=2, seed=1)
        assert meta["family"] == "is"
        assert meta["nodes"] == 5
