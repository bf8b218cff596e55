"""Structures the lower-bound and counterexample experiments run on.

* coloured paths over ``E/2, G/1``: P_n (n vertices, both endpoints green),
  P^C_n (2n+1 vertices, only the centre green) and the two classes built
  from them;
* ordered binary forests carrying tree encodings, for the sentences of
  :mod:`fomod.encodings.sentences`;
* the forests A_i, the disjoint union of the encodings of the set bits of i.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from enum import StrEnum

import networkx as nx

from fomod.encodings.sentences import COLOURED_SIGNATURE, COLOURS, ORDERED_SIGNATURE, PATH_SIGNATURE
from fomod.encodings.tower import set_bits, tower
from fomod.encodings.trees import TreeDecoder, decode_roots, encode_forest, encode_number, height_of, roots
from fomod.errors import DomainError
from fomod.model.canonical import canonical_key
from fomod.model.enumerate import StructureClass
from fomod.model.signature import Signature
from fomod.model.structure import Structure, disjoint_union

logger = logging.getLogger(__name__)


class PathVariant(StrEnum):
    """Which vertices of a coloured path are green."""
    ENDPOINTS = "endpoints"
    CENTRE = "centre"


def _path(n: int, green: Sequence[int]) -> Structure:
    return Structure.build(PATH_SIGNATURE, n, {"E": [(a, a + 1) for a in range(n - 1)], "G": green})


def gen_path_fixture(n: int, variant: PathVariant = PathVariant.ENDPOINTS) -> Structure:
    """P_n, or P^C_n with ``variant=CENTRE``."""
    if n < 1:
        raise DomainError(f"paths need n >= 1, got {n}")
    if variant == PathVariant.ENDPOINTS:
        return _path(n, sorted({0, n - 1}))
    return _path(2 * n + 1, [n])


def path_components(A: Structure) -> list[list[int]] | None:
    """The components of ``A`` as vertex lists in edge direction, or None if ``A`` is not a union of directed paths."""
    edges = A.rel("E")
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for a, b in edges:
        if a == b or (b, a) in edges or a in succ or b in pred:
            return None
        succ[a] = b
        pred[b] = a
    if not nx.is_forest(A.gaifman):
        return None
    components = []
    for start in A.universe:
        if start in pred:
            continue
        comp = [start]
        while comp[-1] in succ:
            comp.append(succ[comp[-1]])
        components.append(comp)
    return components


def in_c1(A: Structure) -> bool:
    """Whether ``A`` is isomorphic to an induced substructure of some P_n."""
    components = path_components(A)
    if components is None:
        return False
    green = {t[0] for t in A.rel("G")}
    if len(green) > 2:
        return False
    where = {v: comp for comp in components for v in comp}
    first = {comp[0] for comp in components}
    last = {comp[-1] for comp in components}
    if len(green) <= 1:
        return green <= first | last
    g1, g2 = sorted(green)
    if where[g1] is where[g2]:
        return len(components) == 1 and {g1, g2} == {where[g1][0], where[g1][-1]}
    return (g1 in first and g2 in last) or (g2 in first and g1 in last)


def in_c2(A: Structure) -> bool:
    """Whether ``A`` is a disjoint union of copies of P_n and P^C_n."""
    components = path_components(A)
    if components is None:
        return False
    green = {t[0] for t in A.rel("G")}
    for comp in components:
        m = len(comp)
        marked = {pos for pos, v in enumerate(comp) if v in green}
        if marked != {0, m - 1} and not (m % 2 == 1 and m >= 3 and marked == {m // 2}):
            return False
    return True


def _check_path_signature(sig: Signature) -> None:
    if sig != PATH_SIGNATURE:
        raise DomainError(f"coloured paths live over E/2 G/1, not {sig}")


def _union(parts: Sequence[Structure]) -> Structure:
    return disjoint_union(parts)[0]


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def c1_members(sig: Signature, n: int) -> Iterator[Structure]:
    """One member of C_1 per isomorphism type of size ``n``."""
    _check_path_signature(sig)
    seen = set()
    for lengths in _partitions(n):
        bare = _union([_path(m, []) for m in lengths])
        comps = path_components(bare)
        ends = sorted({v for comp in comps for v in (comp[0], comp[-1])})
        for k in range(3):
            for green in itertools.combinations(ends, k):
                A = Structure.build(sig, n, {"E": bare.rel("E"), "G": green})
                if not in_c1(A):
                    continue
                key = canonical_key(A)
                if key not in seen:
                    seen.add(key)
                    yield A


def c2_members(sig: Signature, n: int) -> Iterator[Structure]:
    """One member of C_2 per isomorphism type of size ``n``."""
    _check_path_signature(sig)
    kinds = [(m, PathVariant.ENDPOINTS) for m in range(1, n + 1)]
    kinds += [(2 * k + 1, PathVariant.CENTRE) for k in range(1, (n - 1) // 2 + 1)]
    kinds.sort()

    def rec(remaining: int, start: int) -> Iterator[list[tuple[int, PathVariant]]]:
        if remaining == 0:
            yield []
            return
        for idx in range(start, len(kinds)):
            size, _ = kinds[idx]
            if size > remaining:
                break
            for rest in rec(remaining - size, idx):
                yield [kinds[idx]] + rest

    for combo in rec(n, 0):
        parts = [gen_path_fixture(m if v == PathVariant.ENDPOINTS else m // 2, v) for m, v in combo]
        yield _union(parts)


def c1_class() -> StructureClass:
    """Induced substructures of the paths P_n; closed under substructures, not under disjoint unions."""
    return StructureClass("C1", in_c1, max_degree=2, hereditary=True, generator=c1_members)


def c2_class() -> StructureClass:
    """Disjoint unions of P_n and P^C_n; closed under disjoint unions, not under substructures."""
    return StructureClass("C2", in_c2, max_degree=2, hereditary=False, generator=c2_members)


# -- ordered binary forests ------------------------------------------------


def is_ordered_forest(A: Structure) -> bool:
    """At most one left and one right successor per node, at most one parent, no cycles."""
    s0, s1 = A.rel("S_0"), A.rel("S_1")
    if s0 & s1:
        return False
    for rel in (s0, s1):
        if len({a for a, _ in rel}) != len(rel):
            return False
    g = nx.DiGraph()
    g.add_nodes_from(A.universe)
    g.add_edges_from(s0 | s1)
    return nx.is_branching(g)


def is_coloured_ordered_forest(A: Structure) -> bool:
    """An ordered forest whose V_M blocks partition the universe."""
    if not is_ordered_forest(A):
        return False
    counts = Counter(t[0] for name in COLOURS for t in A.rel(name))
    return all(counts[a] == 1 for a in A.universe)


def ordered_forests() -> StructureClass:
    return StructureClass("ordered-forests", is_ordered_forest, max_degree=3)


def coloured_ordered_forests() -> StructureClass:
    return StructureClass("coloured-ordered-forests", is_coloured_ordered_forest, max_degree=3)


def ordered_encoding(T: Structure, height: int, *, coloured: bool = False) -> Structure:
    """A complete ordered binary tree of ``height`` whose read-out below the root is the binary tree ``T``.

    Nodes are numbered heap-style: node p has left child 2p+1 and right child 2p+2.
    """
    tops = roots(T)
    if len(tops) != 1:
        raise DomainError("expected a binary tree with a single root")
    if height < height_of(T):
        raise DomainError(f"height {height} is below the tree height {height_of(T)}")
    children = TreeDecoder(T).children
    n = 2 ** (height + 1) - 1
    inner = range((n - 1) // 2)
    rels: dict[str, list] = {
        "S_0": [(p, 2 * p + 1) for p in inner],
        "S_1": [(p, 2 * p + 2) for p in inner],
    }
    opened: dict[int, frozenset[int]] = {}
    stack = [(tops[0], 0)]
    while stack:
        t, p = stack.pop()
        opened[p] = frozenset(range(len(children[t])))
        stack.extend((c, 2 * p + 1 + side) for side, c in enumerate(children[t]))
    if coloured:
        for name, m in COLOURS.items():
            rels[name] = [p for p in range(n) if opened.get(p, frozenset()) == m]
        return Structure.build(COLOURED_SIGNATURE, n, rels)
    rels["V_0"] = [p for p, m in opened.items() if 0 in m]
    rels["V_1"] = [p for p, m in opened.items() if 1 in m]
    return Structure.build(ORDERED_SIGNATURE, n, rels)


def encoding_forest(
    h: int, values: Sequence[int], *, height: int | None = None, coloured: bool = False
) -> Structure:
    """One complete ordered tree per value, each carrying that value's encoding at its root.

    The default height 2·Tower(h+1) is the depth the lower-bound sentences
    require to be complete below an encoding.
    """
    if not values:
        raise DomainError("need at least one value")
    height = 2 * tower(h + 1) if height is None else height
    return _union([ordered_encoding(encode_number(h, i), height, coloured=coloured) for i in values])


# -- witnesses for decomposition lower bounds ------------------------------


def fv_lower_witnesses(h: int, H: int, indices: Sequence[int]) -> list[Structure]:
    """A_i for each requested i: the union of the encodings of the set bits of i.

    Raises:
        DomainError: If H is outside [1, Tower(h+3)] or some i is outside [1, 2^H - 1];
            i = 0 would be the empty forest.
    """
    if not 1 <= H <= tower(h + 3):
        raise DomainError(f"H must lie in [1, Tower({h + 3})], got {H}")
    out = []
    for i in indices:
        if i == 0:
            raise DomainError("A_0 is the empty forest, which is not a structure")
        if not 0 < i < 2**H:
            raise DomainError(f"index {i} is outside [1, {2**H - 1}]")
        out.append(encode_forest(h, set_bits(i)))
    logger.debug("built %d witnesses for h=%d, H=%d", len(out), h, H)
    return out


def fv_sentence_holds(F: Structure, h: int) -> bool:
    """Whether every root of ``F`` has another root encoding the same number, read off by decoding."""
    values = decode_roots(F, h)
    if any(v is None for v in values):
        raise DomainError(f"some root of the forest is not an encoding with parameter {h}")
    return all(c >= 2 for c in Counter(values).values())


def fv_premise_holds(witnesses: Sequence[Structure], h: int) -> bool:
    """A_i ⊎ A_j has every root paired exactly when i = j, for all pairs of witnesses."""
    for i, A in enumerate(witnesses):
        for j, B in enumerate(witnesses):
            if fv_sentence_holds(_union([A, B]), h) != (i == j):
                logger.info("premise fails at (%d, %d)", i, j)
                return False
    return True
