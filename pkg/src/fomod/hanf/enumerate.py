"""Enumeration of ν-bounded r-spheres up to centre-preserving isomorphism.

Spheres are grown from their centres in breadth-first order: a new element
is only added at distance ≥ every existing distance and ≤ r, so each sphere
is reached from an isomorphic copy of each of its breadth-first prefixes.
"""
from __future__ import annotations

import logging
from collections.abc import Iterator

import networkx as nx

from fomod.budget import Budget, ensure_budget
from fomod.errors import DomainError
from fomod.model.canonical import canonical_key
from fomod.model.enumerate import augmentations, enumerate_structures
from fomod.model.nu import DegreeBound, ExplicitTable, is_nu_bounded
from fomod.model.signature import Signature
from fomod.model.spheres import Sphere
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)


def _patterns(m: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings: which centre positions share an element."""

    def rec(prefix: list[int], top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for v in range(top + 2):
            yield from rec(prefix + [v], max(top, v))

    yield from rec([0], 0)


def _distances(A: Structure, centres: tuple[int, ...]) -> dict[int, int]:
    return nx.multi_source_dijkstra_path_length(A.gaifman, set(centres))


def enumerate_spheres(
    sig: Signature,
    nu: DegreeBound | ExplicitTable,
    r: int,
    centres: int,
    budget: Budget | None = None,
) -> list[Sphere]:
    """All ν-bounded r-spheres with ``centres`` centres, canonical and in canonical order."""
    if centres < 1:
        raise DomainError("spheres need at least one centre")
    if r < 0:
        raise DomainError("radius must be non-negative")
    budget = ensure_budget(budget)
    max_degree = nu.max_degree
    found: dict = {}
    frontier: list[tuple[Structure, tuple[int, ...]]] = []

    def admit(A: Structure, cs: tuple[int, ...]) -> bool:
        if not is_nu_bounded(A, nu):
            return False
        key = canonical_key(A, cs)
        if key in found:
            return False
        found[key] = (A, cs)
        return True

    for pattern in _patterns(centres):
        k = max(pattern) + 1
        for A in enumerate_structures(sig, k, max_degree=max_degree, budget=budget):
            if admit(A, pattern):
                frontier.append((A, pattern))

    while frontier:
        nxt = []
        for B, cs in frontier:
            old = _distances(B, cs)
            top = max(old.values())
            for A in augmentations(B, max_degree=max_degree, budget=budget):
                dist = _distances(A, cs)
                new = dist.get(B.size)
                if new is None or new < top or new > r:
                    continue
                if any(dist[a] != d for a, d in old.items()):
                    continue
                if admit(A, cs):
                    nxt.append((A, cs))
        frontier = nxt
    logger.info("%d spheres of radius %d with %d centres over %s", len(found), r, centres, sig)
    spheres = [Sphere(A, cs, r).canonical() for A, cs in found.values()]
    return sorted(spheres, key=lambda t: t.key)


def count_spheres(sig: Signature, nu: DegreeBound | ExplicitTable, r: int, centres: int = 1, budget: Budget | None = None) -> int:
    return len(enumerate_spheres(sig, nu, r, centres, budget))
