"""Canonical labellings by colour refinement and individualisation.

The canonical key of a structure (with an optional tuple of distinguished
centres) is the least relation encoding reachable from the refined
partition; two structures get the same key iff they are isomorphic by a
map sending centre i to centre i.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from fomod.budget import Budget, ensure_budget
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)

# (size, per-relation sorted tuples, centre labels)
Key = tuple


@dataclass(frozen=True)
class CanonicalForm:
    key: Key
    labelling: tuple[int, ...]

    def apply(self, A: Structure) -> Structure:
        return A.relabel(self.labelling)


def _initial_colours(A: Structure, centres: Sequence[int]) -> list:
    return [tuple(i for i, c in enumerate(centres) if c == v) for v in A.universe]


def _refine(A: Structure, colours: list) -> list[int]:
    inc = A.incidence
    k = len(set(colours))
    while True:
        sigs = [
            (colours[v], tuple(sorted((ri, pos, tuple(colours[u] for u in t)) for ri, pos, t in inc[v])))
            for v in A.universe
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == k:
            return new
        colours, k = new, len(rank)


def _self_contained(A: Structure, v: int) -> bool:
    return all(x == v for _, _, t in A.incidence[v] for x in t)


def _encode(A: Structure, labels: list[int], centres: Sequence[int]) -> Key:
    rels = tuple(tuple(sorted(tuple(labels[x] for x in t) for t in tuples)) for tuples in A.relations)
    return (A.size, rels, tuple(labels[c] for c in centres))


def _search(A: Structure, colours: list, centres: Sequence[int], best: list, budget: Budget) -> None:
    budget.spend()
    colours = _refine(A, colours)
    cells: dict[int, list[int]] = defaultdict(list)
    for v, c in enumerate(colours):
        cells[c].append(v)
    target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        enc = _encode(A, colours, centres)
        if best[0] is None or enc < best[0]:
            best[0], best[1] = enc, tuple(colours)
        return
    members = cells[target]
    n = A.size
    if all(_self_contained(A, v) for v in members):
        # equal colour and no outside tuples: the members are interchangeable
        order = {v: i for i, v in enumerate(members)}
        _search(A, [c * n + order.get(v, 0) for v, c in enumerate(colours)], centres, best, budget)
        return
    for v in members:
        _search(A, [2 * c + (0 if u == v else 1) for u, c in enumerate(colours)], centres, best, budget)


def canonical_form(A: Structure, centres: Sequence[int] = (), budget: Budget | None = None) -> CanonicalForm:
    """Canonical key and the labelling (old element -> canonical element) reaching it."""
    centres = tuple(centres)
    for c in centres:
        A.check_element(c)
    best: list = [None, None]
    _search(A, _initial_colours(A, centres), centres, best, ensure_budget(budget))
    return CanonicalForm(best[0], best[1])


@lru_cache(maxsize=65536)
def canonical_key(A: Structure, centres: tuple[int, ...] = ()) -> Key:
    return canonical_form(A, centres).key


def are_isomorphic(
    A: Structure, B: Structure, centres_a: Sequence[int] = (), centres_b: Sequence[int] = ()
) -> bool:
    if A.signature != B.signature or A.size != B.size or len(centres_a) != len(centres_b):
        return False
    return canonical_key(A, tuple(centres_a)) == canonical_key(B, tuple(centres_b))
