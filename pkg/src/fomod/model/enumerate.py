"""Exhaustive enumeration of small structures and named structure classes.

Two sources: every labelled structure on ``range(n)`` (exact, used by the
oracles), and one structure per isomorphism type, grown one element at a
time (valid for classes closed under induced substructures).
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from tqdm import tqdm

from fomod.budget import Budget, ensure_budget
from fomod.model.canonical import canonical_key
from fomod.model.nu import DegreeBound, ExplicitTable, is_nu_bounded
from fomod.model.signature import Signature
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)

Candidate = tuple[int, tuple[int, ...]]


def candidate_tuples(sig: Signature, n: int, containing: int | None = None) -> list[Candidate]:
    """All (relation index, tuple) pairs over ``range(n)`` in lexicographic order.

    With ``containing`` set, only tuples mentioning that element.
    """
    return [
        (ri, t)
        for ri, (_, arity) in enumerate(sig.relations)
        for t in itertools.product(range(n), repeat=arity)
        if containing is None or containing in t
    ]


def tuple_subsets(
    n: int,
    cands: Sequence[Candidate],
    *,
    max_degree: int | None = None,
    edges: Iterable[tuple[int, int]] = (),
    budget: Budget | None = None,
) -> Iterator[tuple[Candidate, ...]]:
    """Subsets of ``cands`` keeping every Gaifman degree ≤ ``max_degree``.

    ``edges`` are Gaifman edges already present and count towards degrees.
    """
    budget = ensure_budget(budget)
    pair_count: dict[tuple[int, int], int] = {}
    deg = [0] * n
    for a, b in edges:
        p = (min(a, b), max(a, b))
        pair_count[p] = 1
        deg[a] += 1
        deg[b] += 1
    chosen: list[Candidate] = []

    def rec(i: int) -> Iterator[tuple[Candidate, ...]]:
        budget.spend()
        if i == len(cands):
            yield tuple(chosen)
            return
        yield from rec(i + 1)
        ri, t = cands[i]
        pairs = list(itertools.combinations(sorted(set(t)), 2))
        for p in pairs:
            pair_count[p] = pair_count.get(p, 0) + 1
            if pair_count[p] == 1:
                deg[p[0]] += 1
                deg[p[1]] += 1
        if max_degree is None or all(deg[x] <= max_degree for p in pairs for x in p):
            chosen.append((ri, t))
            yield from rec(i + 1)
            chosen.pop()
        for p in pairs:
            pair_count[p] -= 1
            if pair_count[p] == 0:
                deg[p[0]] -= 1
                deg[p[1]] -= 1
                del pair_count[p]

    yield from rec(0)


def _with_tuples(sig: Signature, n: int, base: Sequence[frozenset], extra: Iterable[Candidate]) -> Structure:
    rels = [set(r) for r in base] if base else [set() for _ in sig.relations]
    for ri, t in extra:
        rels[ri].add(t)
    return Structure(sig, n, tuple(frozenset(r) for r in rels))


def enumerate_structures(
    sig: Signature,
    n: int,
    *,
    max_degree: int | None = None,
    budget: Budget | None = None,
) -> Iterator[Structure]:
    """Every labelled σ-structure on ``range(n)``, pruning branches whose Gaifman degree exceeds ``max_degree``."""
    cands = candidate_tuples(sig, n)
    for chosen in tuple_subsets(n, cands, max_degree=max_degree, budget=budget):
        yield _with_tuples(sig, n, (), chosen)


def augmentations(
    A: Structure, *, max_degree: int | None = None, budget: Budget | None = None
) -> Iterator[Structure]:
    """Every structure on ``range(A.size + 1)`` whose restriction to ``range(A.size)`` is ``A``."""
    n = A.size + 1
    cands = candidate_tuples(A.signature, n, containing=A.size)
    for chosen in tuple_subsets(n, cands, max_degree=max_degree, edges=A.gaifman.edges(), budget=budget):
        yield _with_tuples(A.signature, n, A.relations, chosen)


def iso_classes(
    sig: Signature,
    cap: int,
    *,
    max_degree: int | None = None,
    predicate: Callable[[Structure], bool] = lambda A: True,
    budget: Budget | None = None,
) -> Iterator[Structure]:
    """One member per isomorphism type, sizes 1..cap, of a class closed under induced substructures."""
    level = [A for A in enumerate_structures(sig, 1, max_degree=max_degree, budget=budget) if predicate(A)]
    for n in range(1, cap + 1):
        if n > 1:
            seen: set = set()
            nxt = []
            for B in level:
                for A in augmentations(B, max_degree=max_degree, budget=budget):
                    key = canonical_key(A)
                    if key in seen or not predicate(A):
                        continue
                    seen.add(key)
                    nxt.append(A)
            level = nxt
        logger.debug("%d isomorphism types of size %d", len(level), n)
        yield from level


def structures_up_to(
    sig: Signature,
    cap: int,
    *,
    max_degree: int | None = None,
    budget: Budget | None = None,
) -> Iterator[Structure]:
    """Labelled structures of sizes 1..cap."""
    for n in range(1, cap + 1):
        yield from enumerate_structures(sig, n, max_degree=max_degree, budget=budget)


@dataclass(frozen=True)
class StructureClass:
    """A class of finite structures given by a membership predicate.

    Attributes:
        name: Display name, also used on the command line.
        predicate: Membership test.
        max_degree: Upper bound on the Gaifman degree of members, used to prune enumeration.
        hereditary: Whether the class is closed under induced substructures, which
            allows growing isomorphism types one element at a time.
        generator: Optional function ``(sig, n)`` yielding one member per isomorphism
            type of size ``n``; preferred when enumeration up to isomorphism is requested.
    """

    name: str
    predicate: Callable[[Structure], bool] = field(compare=False)
    max_degree: int | None = None
    hereditary: bool = True
    generator: Callable[[Signature, int], Iterable[Structure]] | None = field(default=None, compare=False)

    def __call__(self, A: Structure) -> bool:
        return self.predicate(A)

    def members(
        self,
        sig: Signature,
        cap: int,
        *,
        up_to_iso: bool = False,
        budget: Budget | None = None,
        progress: bool = False,
    ) -> Iterator[Structure]:
        """Members of sizes 1..cap: labelled, or one per isomorphism type when ``up_to_iso``."""
        budget = ensure_budget(budget)
        if up_to_iso and self.generator is not None:
            source: Iterable[Structure] = (A for n in range(1, cap + 1) for A in self.generator(sig, n))
        elif up_to_iso and self.hereditary:
            source = iso_classes(sig, cap, max_degree=self.max_degree, predicate=self.predicate, budget=budget)
        elif up_to_iso:
            source = _dedup(
                A for A in structures_up_to(sig, cap, max_degree=self.max_degree, budget=budget) if self.predicate(A)
            )
        else:
            source = (
                A for A in structures_up_to(sig, cap, max_degree=self.max_degree, budget=budget) if self.predicate(A)
            )
        yield from tqdm(source, desc=self.name, disable=not progress, leave=False)


def _dedup(structures: Iterable[Structure]) -> Iterator[Structure]:
    seen: set = set()
    for A in structures:
        key = canonical_key(A)
        if key not in seen:
            seen.add(key)
            yield A


def all_structures() -> StructureClass:
    return StructureClass("all", lambda A: True)


def degree_bounded(d: int) -> StructureClass:
    return StructureClass(f"degree<={d}", lambda A: A.degree <= d, max_degree=d)


def nu_bounded(nu: DegreeBound | ExplicitTable) -> StructureClass:
    return StructureClass(f"nu[{nu}]", lambda A: is_nu_bounded(A, nu), max_degree=nu.max_degree)
