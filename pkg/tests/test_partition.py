from __future__ import annotations

import numpy as np
import pytest

from acpsearch.generators import GraphSpec, gen_is
from acpsearch.model import IntegerProgram, LinearConstraint, Comparator, Sense, VariableDef
from acpsearch.partition import free_variables, partition_constraints, select_block

from conftest import random_binary_program


def toy(n_cons=6, n_vars=6):
    cons = tuple(
        LinearConstraint(((i % n_vars, 1.0), ((i + 1) % n_vars, 1.0)), Comparator.LE, 1.0)
        for i in range(n_cons)
    )
    return IntegerProgram(
        variables=tuple(VariableDef(f"x{i}") for i in range(n_vars)),
        constraints=cons,
        objective=tuple((i, 1.0) for i in range(n_vars)),
        sense=Sense.MAXIMIZE,
    )


class TestPartitionConstraints:
    def test_balanced_split_six_by_three(self, rng):
        part = partition_constraints(toy(6), 3, rng)
        assert part.k == 3
        assert [len(b) for b in part.blocks] == [2, 2, 2]
        assert sorted(i for b in part.blocks for i in b) == list(range(6))

    def test_k_one_identity(self, rng):
        part = partition_constraints(toy(6), 1, rng)
        assert sorted(part.blocks[0]) == list(range(6))

    def test_uneven_sizes(self, rng):
        part = partition_constraints(toy(7, 8), 3, rng)
        assert sorted(len(b) for b in part.blocks) == [2, 2, 3]

    def test_k_out_of_range(self, rng):
        with pytest.raises(ValueError):
            partition_constraints(toy(6), 7, rng)
        with pytest.raises(ValueError):
            partition_constraints(toy(6), 0, rng)

    def test_invariants_hold_on_random_programs(self):
        rng = np.random.default_rng(7)
        for _ in range(120):
            p = random_binary_program(rng, max_vars=10, max_cons=12)
            if p.n_constraints == 0:
                continue
            k = int(rng.integers(1, p.n_constraints + 1))
            part = partition_constraints(p, k, rng)
            flat = [i for b in part.blocks for i in b]
            assert sorted(flat) == list(range(p.n_constraints))
            assert len(part.blocks) == k
            assert all(len(b) >= 1 for b in part.blocks)
            sizes = [len(b) for b in part.blocks]
            assert max(sizes) - min(sizes) <= 1

    def test_determinism_per_seed(self):
        p = toy(12, 9)
        a = partition_constraints(p, 4, np.random.default_rng(33))
        b = partition_constraints(p, 4, np.random.default_rng(33))
        assert a == b


class TestSelectBlock:
    def test_single_block_always_zero(self, rng):
        part = partition_constraints(toy(6), 1, rng)
        assert select_block(part, rng, previous=0) == 0

    def test_two_blocks_never_repeat(self, rng):
        part = partition_constraints(toy(6), 2, rng)
        prev = select_block(part, rng)
        for _ in range(20):
            cur = select_block(part, rng, previous=prev)
            assert cur != prev
            prev = cur

    def test_frequencies_roughly_uniform(self):
        rng = np.random.default_rng(5)
        part = partition_constraints(toy(20, 12), 10, rng)
        counts = [0] * 10
        prev = None
        for _ in range(10_000):
            b = select_block(part, rng, previous=prev)
            counts[b] += 1
            prev = b
        for c in counts:
            assert 0.05 * 10_000 <= c <= 0.15 * 10_000


class TestFreeVariables:
    def test_single_constraint_block(self, rng):
        p = toy(6)
        part = partition_constraints(p, 6, rng)
        block = 0
        rows = part.blocks[block]
        expected = {i for r in rows for i, _ in p.constraints[r].coeffs}
        assert free_variables(p, part, block) == expected

    def test_all_constraints_block_covers_all_constrained(self, rng):
        p = toy(6)
        part = partition_constraints(p, 1, rng)
        assert free_variables(p, part, 0) == set(range(6))

    def test_path_graph_block(self):
        prog = gen_is(GraphSpec(nodes=3, edges=2, seed=1))
        rng = np.random.default_rng(0)
        part = partition_constraints(prog, 2, rng)
        for b in range(2):
            free = free_variables(prog, part, b)
            (row,) = part.blocks[b]
            assert free == {i for i, _ in prog.constraints[row].coeffs}

    def test_unconstrained_variables_always_free(self, rng):
        p = IntegerProgram(
            variables=tuple(VariableDef(f"x{i}") for i in range(4)),
            constraints=(LinearConstraint(((0, 1.0), (1, 1.0)), Comparator.LE, 1.0),),
            objective=((2, 3.0), (3, -1.0)),
            sense=Sense.MAXIMIZE,
        )
        part = partition_constraints(p, 1, rng)
        assert free_variables(p, part, 0) == {0, 1, 2, 3}
