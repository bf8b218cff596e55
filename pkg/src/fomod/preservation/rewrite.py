"""Rewriting preserved sentences into existential and existential-positive form."""
from __future__ import annotations

import itertools
import logging

from fomod.budget import Budget, ensure_budget
from fomod.errors import DomainError
from fomod.logic.evaluate import ModelChecker
from fomod.logic.measures import is_sentence, moduli
from fomod.logic.syntax import FALSE, Atom, Eq, Formula, Not, conj, disj, exists_many
from fomod.model.canonical import canonical_key
from fomod.model.enumerate import StructureClass
from fomod.model.signature import Signature
from fomod.model.structure import Structure
from fomod.preservation.translate import IndexMap, standardize, translate_enumerated, y

logger = logging.getLogger(__name__)


def _check_sentence(phi: Formula) -> None:
    if not is_sentence(phi):
        raise DomainError("rewriting is defined for sentences only")


def existential_rewrite(phi: Formula, N: int) -> Formula:
    """ψ_N, an existential sentence equivalent to φ on every class closed under induced
    substructures on which φ is preserved under extensions and whose minimal models
    have at most N elements.

    With modulo quantifiers the disjunct for M evaluates φ on M distinct elements;
    without them the tuple y1..yN may repeat elements and one disjunct suffices.
    """
    _check_sentence(phi)
    if N < 1:
        raise DomainError("N must be positive")
    psi = standardize(phi)
    if not moduli(phi):
        ys = [y(j) for j in range(1, N + 1)]
        return exists_many(ys, translate_enumerated(psi, N, IndexMap(N)))
    disjuncts = []
    for M in range(1, N + 1):
        ys = [y(j) for j in range(1, M + 1)]
        distinct = [Not(Eq(a, b)) for a, b in itertools.combinations(ys, 2)]
        body = conj(distinct + [translate_enumerated(psi, M, IndexMap(M))])
        disjuncts.append(exists_many(ys, body))
    return disj(disjuncts)


def canonical_conjunctive_query(A: Structure) -> Formula:
    """γ_A = ∃x1..x|A| of all atoms of A; B ⊨ γ_A iff A maps homomorphically into B."""
    xs = [f"x{a + 1}" for a in A.universe]
    atoms = [Atom(name, tuple(xs[a] for a in t)) for name, tuples in A.items() for t in sorted(tuples)]
    return exists_many(xs, conj(atoms))


def existential_positive_rewrite(
    phi: Formula,
    N: int,
    cls: StructureClass,
    sig: Signature,
    budget: Budget | None = None,
    progress: bool = False,
) -> Formula:
    """⋁ of γ_A over the models A of φ in the class with at most N elements, one per isomorphism type."""
    _check_sentence(phi)
    if N < 1:
        raise DomainError("N must be positive")
    budget = ensure_budget(budget)
    models = []
    seen = set()
    for A in cls.members(sig, N, up_to_iso=True, budget=budget, progress=progress):
        if not ModelChecker(A, budget).holds(phi):
            continue
        key = canonical_key(A)
        if key not in seen:
            seen.add(key)
            models.append(A)
    logger.info("%d models of size at most %d", len(models), N)
    if not models:
        return FALSE
    models.sort(key=lambda A: (A.size, canonical_key(A)))
    return disj(canonical_conjunctive_query(A) for A in models)
