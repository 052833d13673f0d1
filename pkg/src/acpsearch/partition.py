"""Random balanced partitioning of constraint indices and the derived
free-variable neighborhood of a block (two-step variable selection)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import IntegerProgram


@dataclass(frozen=True)
class ConstraintPartition:
    """A k-way disjoint cover of the constraint indices."""

    k: int
    blocks: tuple[tuple[int, ...], ...]


def partition_constraints(
    program: IntegerProgram, k: int, rng: np.random.Generator
) -> ConstraintPartition:
    """Shuffle constraint indices and split into k near-equal contiguous chunks.

    Block sizes differ by at most one and every block is nonempty whenever
    k <= constraint count.  Deterministic given the rng state.
    """
    m = program.n_constraints
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    order = [int(i) for i in rng.permutation(m)]
    base, extra = divmod(m, k)
    blocks: list[tuple[int, ...]] = []
    pos = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        blocks.append(tuple(order[pos : pos + size]))
        pos += size
    return ConstraintPartition(k=k, blocks=tuple(blocks))


def select_block(
    partition: ConstraintPartition,
    rng: np.random.Generator,
    previous: int | None = None,
) -> int:
    """Uniform block choice; with k > 1, resample until it differs from
    ``previous`` so consecutive iterations never repeat a block."""
    k = partition.k
    if k == 1:
        return 0
    while True:
        b = int(rng.integers(0, k))
        if b != previous:
            return b


def free_variables(
    program: IntegerProgram, partition: ConstraintPartition, block: int
) -> set[int]:
    """Variables appearing in any constraint of the block, plus every variable
    that appears in no constraint at all (those are unconstrained and stay
    free in every block; freezing them would pin their initial value forever)."""
    if not 0 <= block < partition.k:
        raise ValueError(f"block {block} outside 0..{partition.k - 1}")
    free: set[int] = set()
    for row in partition.blocks[block]:
        for i, _ in program.constraints[row].coeffs:
            free.add(i)
    constrained: set[int] = set()
    for con in program.constraints:
        for i, _ in con.coeffs:
            constrained.add(i)
    free.update(set(range(program.n_variables)) - constrained)
    return free
