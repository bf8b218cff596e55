"""Brute-force class equivalence of sentences up to a size cap."""
from __future__ import annotations

import logging

from fomod.budget import Budget, ensure_budget
from fomod.errors import DomainError
from fomod.logic.evaluate import ModelChecker
from fomod.logic.measures import is_sentence, relations_used
from fomod.logic.syntax import Formula
from fomod.model.enumerate import StructureClass
from fomod.model.signature import Signature
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)


def brute_equivalent(
    phi: Formula,
    psi: Formula,
    cls: StructureClass,
    cap: int,
    sig: Signature,
    *,
    up_to_iso: bool = False,
    budget: Budget | None = None,
    progress: bool = False,
) -> Structure | None:
    """Search the members of ``cls`` of size ≤ ``cap`` for one on which φ and ψ disagree.

    Enumeration is over labelled structures unless ``up_to_iso`` is set.

    Returns:
        The first counterexample, or None.
    """
    for name, f in (("phi", phi), ("psi", psi)):
        if not is_sentence(f):
            raise DomainError(f"{name} is not a sentence")
        unknown = relations_used(f) - set(sig.names)
        if unknown:
            raise DomainError(f"{name} uses relations outside {sig}: {', '.join(sorted(unknown))}")
    if cap < 1:
        raise DomainError("size cap must be positive")
    budget = ensure_budget(budget)
    checked = 0
    for A in cls.members(sig, cap, up_to_iso=up_to_iso, budget=budget, progress=progress):
        checked += 1
        checker = ModelChecker(A, budget)
        if checker.holds(phi) != checker.holds(psi):
            logger.info("counterexample of size %d after %d structures", A.size, checked)
            return A
    logger.info("no counterexample among %d structures up to size %d", checked, cap)
    return None
