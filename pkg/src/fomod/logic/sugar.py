"""Derived connectives and the ∃^{≥k} counting shorthand."""
from __future__ import annotations

import itertools

from fomod.errors import DomainError
from fomod.logic.syntax import (
    Eq,
    Forall,
    Formula,
    Implies,
    Not,
    VarSupply,
    all_vars,
    conj,
    disj,
    exists_many,
)


def at_least_k(k: int, var: str, body: Formula, supply: VarSupply | None = None) -> Formula:
    """∃^{≥k} var body, spelled out as

        ∃y_1...∃y_k (⋀_{i<j} ¬y_i=y_j ∧ ∀var (⋁_i var=y_i → body))
    """
    if k < 1:
        raise DomainError("∃^{≥k} needs k ≥ 1")
    if supply is None:
        supply = VarSupply(all_vars(body) | {var})
    ys = [supply.fresh(f"{var}_") for _ in range(k)]
    distinct = [Not(Eq(a, b)) for a, b in itertools.combinations(ys, 2)]
    pinned = Forall(var, Implies(disj(Eq(var, y) for y in ys), body))
    return exists_many(ys, conj(distinct + [pinned]))


def at_most_k(k: int, var: str, body: Formula, supply: VarSupply | None = None) -> Formula:
    """¬∃^{≥k+1} var body."""
    return Not(at_least_k(k + 1, var, body, supply))


def distinct(variables) -> Formula:
    return conj(Not(Eq(a, b)) for a, b in itertools.combinations(variables, 2))

