"""Homomorphisms, induced extensions and scattered sets."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

import networkx as nx

from fomod.budget import Budget, ensure_budget
from fomod.errors import DomainError
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)


def _search_order(A: Structure) -> list[int]:
    """Elements by BFS from high-degree elements, so constraints bind early."""
    order: list[int] = []
    seen: set[int] = set()
    for start in sorted(A.universe, key=lambda a: (-A.gaifman.degree(a), a)):
        if start in seen:
            continue
        for a in nx.bfs_tree(A.gaifman, start):
            if a not in seen:
                seen.add(a)
                order.append(a)
    return order


def find_homomorphism(A: Structure, B: Structure, budget: Budget | None = None) -> dict[int, int] | None:
    """Some h: A -> B with h(R^A) ⊆ R^B for every R, or None.

    Backtracking over A's elements; each tuple of A is checked as soon as its
    last element is assigned.
    """
    if A.signature != B.signature:
        raise DomainError("homomorphisms need a common signature")
    budget = ensure_budget(budget)
    order = _search_order(A)
    position = {a: i for i, a in enumerate(order)}
    # checks[i]: tuples of A completed by assigning order[i]
    checks: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in order]
    for ri, tuples in enumerate(A.relations):
        for t in tuples:
            checks[max(position[x] for x in t)].append((ri, t))
    h: dict[int, int] = {}

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        a = order[i]
        for b in B.universe:
            budget.spend()
            h[a] = b
            if all(tuple(h[x] for x in t) in B.relations[ri] for ri, t in checks[i]) and extend(i + 1):
                return True
        del h[a]
        return False

    if extend(0):
        return dict(sorted(h.items()))
    return None


def is_homomorphism(A: Structure, B: Structure, h: Mapping[int, int]) -> bool:
    if any(a not in h or not 0 <= h[a] < B.size for a in A.universe):
        return False
    return all(
        tuple(h[x] for x in t) in rb for ra, rb in zip(A.relations, B.relations) for t in ra
    )


def is_induced_extension(A: Structure, B: Structure, embedding: Mapping[int, int]) -> bool:
    """True iff ``embedding`` is injective and R^A maps exactly onto R^B restricted to the image."""
    if A.signature != B.signature:
        raise DomainError("extensions need a common signature")
    if any(a not in embedding for a in A.universe):
        raise DomainError("embedding must be total on the smaller structure")
    image = [embedding[a] for a in A.universe]
    if len(set(image)) != len(image) or any(not 0 <= b < B.size for b in image):
        return False
    img = set(image)
    for ra, rb in zip(A.relations, B.relations):
        mapped = {tuple(embedding[x] for x in t) for t in ra}
        if mapped != {t for t in rb if all(x in img for x in t)}:
            return False
    return True


@dataclass(frozen=True)
class ScatterResult:
    """Outcome of the greedy scattered-set search; ``elements`` is the maximal greedy set on failure."""

    elements: frozenset[int]
    found: bool


def scattered_subset(A: Structure, r: int, target: int) -> ScatterResult:
    """Greedy r-scattered set: take the smallest element outside the 2r-balls of earlier picks."""
    if target < 1:
        raise DomainError("target must be positive")
    picks: list[int] = []
    blocked: set[int] = set()
    for a in A.universe:
        if a in blocked:
            continue
        picks.append(a)
        if len(picks) == target:
            logger.debug("found %d-scattered set %s", r, picks)
            return ScatterResult(frozenset(picks), True)
        blocked |= A.neighbourhood([a], 2 * r)
    return ScatterResult(frozenset(picks), False)
