"""Finite relational structures and the structure-level algebra on them.

Elements are the dense integers ``0..size-1``. Every operation returns a new
value; structures are never mutated after construction.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from fomod.errors import DomainError
from fomod.model.signature import Signature, partition_name

logger = logging.getLogger(__name__)

Tuple = tuple[int, ...]


def _as_tuple(t) -> Tuple:
    if isinstance(t, (int, np.integer)):
        return (int(t),)
    return tuple(int(x) for x in t)


@dataclass(frozen=True)
class Structure:
    """A finite σ-structure.

    Attributes:
        signature: The relational signature σ.
        size: Number of elements; the universe is ``range(size)``.
        relations: One frozenset of tuples per relation symbol, aligned with
            ``signature.relations``.
    """

    signature: Signature
    size: int
    relations: tuple[frozenset[Tuple], ...]

    def __post_init__(self):
        if self.size < 1:
            raise DomainError("a structure needs a non-empty universe")
        if len(self.relations) != len(self.signature):
            raise DomainError("relation list does not match the signature")
        for (name, arity), tuples in zip(self.signature.relations, self.relations):
            for t in tuples:
                if len(t) != arity:
                    raise DomainError(f"tuple {t} in {name} has length {len(t)}, arity is {arity}")
                if any(not 0 <= x < self.size for x in t):
                    raise DomainError(f"tuple {t} in {name} leaves the universe of size {self.size}")

    @classmethod
    def build(
        cls,
        signature: Signature,
        size: int,
        relations: Mapping[str, Iterable] | None = None,
    ) -> Structure:
        """Build a structure from a name -> tuples mapping; missing names are empty.

        Unary tuples may be given as bare ints.
        """
        relations = dict(relations or {})
        for name in relations:
            signature.index(name)
        rels = tuple(
            frozenset(_as_tuple(t) for t in relations.get(name, ())) for name in signature.names
        )
        return cls(signature, size, rels)

    @property
    def universe(self) -> range:
        return range(self.size)

    def rel(self, name: str) -> frozenset[Tuple]:
        return self.relations[self.signature.index(name)]

    def items(self) -> Iterable[tuple[str, frozenset[Tuple]]]:
        return zip(self.signature.names, self.relations)

    @cached_property
    def gaifman(self) -> nx.Graph:
        """Undirected loop-free graph joining distinct elements that share a tuple."""
        g = nx.Graph()
        g.add_nodes_from(range(self.size))
        for tuples in self.relations:
            for t in tuples:
                g.add_edges_from((a, b) for a, b in itertools.combinations(set(t), 2))
        return g

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int, Tuple], ...], ...]:
        """For each element, the (relation index, position, tuple) triples it occurs in."""
        inc: list[list[tuple[int, int, Tuple]]] = [[] for _ in range(self.size)]
        for ri, tuples in enumerate(self.relations):
            for t in tuples:
                for pos, x in enumerate(t):
                    inc[x].append((ri, pos, t))
        return tuple(tuple(row) for row in inc)

    @cached_property
    def degree(self) -> int:
        return max((d for _, d in self.gaifman.degree()), default=0)

    def neighbourhood(self, seeds: Iterable[int], r: int) -> frozenset[int]:
        seeds = list(seeds)
        for a in seeds:
            self.check_element(a)
        if r < 0:
            raise DomainError("radius must be non-negative")
        if not seeds:
            return frozenset()
        return frozenset(nx.multi_source_dijkstra_path_length(self.gaifman, set(seeds), cutoff=r))

    def check_element(self, a: int) -> None:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.size:
            raise DomainError(f"element {a!r} is not in the universe 0..{self.size - 1}")

    def holds(self, name: str, t: Sequence[int]) -> bool:
        return tuple(t) in self.rel(name)

    def reduct(self, signature: Signature) -> Structure:
        """Forget every relation not named in ``signature``."""
        return Structure.build(signature, self.size, {n: self.rel(n) for n in signature.names})

    def expand(self, name: str, arity: int, tuples: Iterable) -> Structure:
        sig = self.signature.extend((name, arity))
        return Structure(sig, self.size, self.relations + (frozenset(_as_tuple(t) for t in tuples),))

    def relabel(self, perm: Sequence[int]) -> Structure:
        """Rename element ``a`` to ``perm[a]``; ``perm`` must be a permutation."""
        return Structure(
            self.signature,
            self.size,
            tuple(frozenset(tuple(perm[x] for x in t) for t in tuples) for tuples in self.relations),
        )


def gaifman_neighbourhood(A: Structure, seeds: Iterable[int], r: int) -> frozenset[int]:
    """N_r(seeds): every element at Gaifman distance at most ``r`` from some seed."""
    return A.neighbourhood(seeds, r)


def induced_with_map(A: Structure, keep: Iterable[int]) -> tuple[Structure, dict[int, int]]:
    """Induced substructure on ``keep`` and the old-to-new renaming (numeric order kept)."""
    kept = sorted(set(keep))
    if not kept:
        raise DomainError("cannot induce a substructure on the empty set")
    for a in kept:
        A.check_element(a)
    new = {a: i for i, a in enumerate(kept)}
    rels = tuple(
        frozenset(tuple(new[x] for x in t) for t in tuples if all(x in new for x in t))
        for tuples in A.relations
    )
    return Structure(A.signature, len(kept), rels), new


def induced_substructure(A: Structure, keep: Iterable[int]) -> Structure:
    return induced_with_map(A, keep)[0]


def _check_parts(parts: Sequence[Structure]) -> Signature:
    if not parts:
        raise DomainError("need at least one part")
    sig = parts[0].signature
    if any(p.signature != sig for p in parts):
        raise DomainError("all parts must share one signature")
    return sig


def disjoint_union(parts: Sequence[Structure]) -> tuple[Structure, tuple[tuple[int, int], ...]]:
    """A_1 ∪̇ ... ∪̇ A_s together with π: new element -> (0-based part index, original element)."""
    sig = _check_parts(parts)
    offsets = np.concatenate(([0], np.cumsum([p.size for p in parts])))
    pi = tuple((i, a) for i, p in enumerate(parts) for a in range(p.size))
    rels = []
    for ri in range(len(sig)):
        rels.append(
            frozenset(
                tuple(int(offsets[i]) + x for x in t) for i, p in enumerate(parts) for t in p.relations[ri]
            )
        )
    return Structure(sig, int(offsets[-1]), tuple(rels)), pi


def disjoint_sum(parts: Sequence[Structure]) -> tuple[Structure, tuple[tuple[int, int], ...]]:
    """The disjoint union expanded by unary P_1..P_s marking where each element came from."""
    union, pi = disjoint_union(parts)
    sig = union.signature.with_partition(len(parts))
    marks = tuple(
        frozenset((a,) for a, (i, _) in enumerate(pi) if i == part) for part in range(len(parts))
    )
    return Structure(sig, union.size, union.relations + marks), pi


def product_index(coords: Sequence[int], sizes: Sequence[int]) -> int:
    """Row-major index of ``(a_1, ..., a_s)``: Σ a_i·Π_{j>i}|A_j|."""
    return int(np.ravel_multi_index(tuple(coords), tuple(sizes)))


def product_coords(index: int, sizes: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(c) for c in np.unravel_index(index, tuple(sizes)))


def direct_product(parts: Sequence[Structure]) -> Structure:
    """A_1 ⊗ ... ⊗ A_s with row-major element indexing."""
    sig = _check_parts(parts)
    sizes = tuple(p.size for p in parts)
    rels = []
    for ri, (_, arity) in enumerate(sig.relations):
        tuples = set()
        for combo in itertools.product(*(sorted(p.relations[ri]) for p in parts)):
            # combo[i][j] is the i-th coordinate of the j-th entry
            coords = np.array(combo, dtype=np.int64).reshape(len(parts), arity)
            tuples.add(tuple(int(x) for x in np.ravel_multi_index(tuple(coords), sizes)))
        rels.append(frozenset(tuples))
    return Structure(sig, int(np.prod(sizes)), tuple(rels))


def partition_of(A: Structure, s: int) -> tuple[frozenset[int], ...]:
    """The sets P_1..P_s of a structure over σ_s."""
    return tuple(frozenset(t[0] for t in A.rel(partition_name(i))) for i in range(1, s + 1))
