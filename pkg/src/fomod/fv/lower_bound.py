"""The counting argument behind size lower bounds for 2-disjoint decompositions.

Given A_0, ..., A_{N-1} with A_i ⊕ A_j ⊨ φ iff i = j, a decomposition with
fewer than log2(N) propositions gives two indices i ≠ j with the same truth
values on both components, and then it cannot separate (A_i, A_j) from
(A_i, A_i).
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from fomod.errors import DomainError
from fomod.fv.reduction import ReductionSequence, delta_holds, eval_reduction
from fomod.logic.evaluate import evaluate
from fomod.logic.syntax import Formula
from fomod.model.structure import Structure, disjoint_sum, disjoint_union

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Collision:
    """Indices i ≠ j on which ``D`` answers ``claimed`` for the pair (A_i, A_j) although ``expected`` holds."""

    i: int
    j: int
    claimed: bool
    expected: bool
    pigeonhole: bool


def _vector(D: ReductionSequence, component: int, A: Structure) -> tuple[bool, ...]:
    return tuple(delta_holds(delta, A, {}) for delta in D.deltas[component])


def premise_holds(phi: Formula, structures: Sequence[Structure], *, with_partition: bool = True) -> bool:
    """A_i ⊕ A_j ⊨ φ iff i = j, for all indices.

    Without ``with_partition`` the sum is the plain disjoint union, for sentences over σ.
    """
    for i, A in enumerate(structures):
        for j, B in enumerate(structures):
            combined = disjoint_sum([A, B])[0] if with_partition else disjoint_union([A, B])[0]
            if evaluate(combined, phi) != (i == j):
                logger.info("premise fails at (%d, %d)", i, j)
                return False
    return True


def refute_decomposition(
    D: ReductionSequence,
    structures: Sequence[Structure],
    premise: Callable[[int, int], bool] | None = None,
) -> Collision | None:
    """A pair of indices on which ``D`` contradicts ``premise`` (default: i = j), or None.

    Collisions of the truth-value vectors are tried first; this is the pair
    the counting argument predicts. Otherwise every pair is checked directly.
    """
    if D.s != 2:
        raise DomainError("the counting argument is stated for 2-disjoint decompositions")
    if D.variables:
        raise DomainError("the counting argument is stated for sentences")
    premise = premise or (lambda i, j: i == j)
    first: dict[tuple, int] = {}
    for i, A in enumerate(structures):
        key = (_vector(D, 0, A), _vector(D, 1, A))
        if key in first:
            j = first[key]
            claimed = eval_reduction(D, [structures[j], A])
            if claimed != premise(j, i):
                return Collision(j, i, claimed, premise(j, i), True)
            claimed = eval_reduction(D, [A, structures[j]])
            if claimed != premise(i, j):
                return Collision(i, j, claimed, premise(i, j), True)
        else:
            first[key] = i
    for i, A in enumerate(structures):
        for j, B in enumerate(structures):
            claimed = eval_reduction(D, [A, B])
            if claimed != premise(i, j):
                return Collision(i, j, claimed, premise(i, j), False)
    return None
