"""Binary tree encodings B_h(i) of numbers.

A binary forest is a structure over ``E/2`` whose edge relation is a
directed forest with at most two children per node. For h = -1 the four
numbers 0..3 are encoded by fixed shapes::

    0: o        1: o        2: o        3:   o
                   |           |            / \\
                   o           o           o   o
                               |           |
                               o           o

For h >= 0 a tree encodes i when its top Tower(h+1)-1 levels form a complete
binary tree and the nodes at depth Tower(h+1) are exactly roots of
encodings (parameter h-1) of the positions of the 1-bits of i. Each
position may appear more than once, but only set bits may appear.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence

import networkx as nx
from rich.tree import Tree

from fomod.errors import DomainError
from fomod.encodings.tower import set_bits, tower
from fomod.model.signature import Signature
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)

TREE_SIGNATURE = Signature.of(("E", 2))

# Child lists in drawing order; the canonical form sorts them.
Shape = tuple
BASE_SHAPES: tuple[Shape, ...] = (
    (),
    ((),),
    (((),),),
    (((),), ()),
)


def _canon(shape: Shape) -> Shape:
    return tuple(sorted(_canon(c) for c in shape))


_BASE_VALUE = {_canon(s): i for i, s in enumerate(BASE_SHAPES)}
# Deeper encodings would need a complete part with 2^65535 nodes.
MAX_DECODE_PARAMETER = 4


class _TreeBuilder:
    def __init__(self):
        self.size = 0
        self.edges: list[tuple[int, int]] = []

    def node(self, parent: int | None = None) -> int:
        v = self.size
        self.size += 1
        if parent is not None:
            self.edges.append((parent, v))
        return v

    def shape(self, shape: Shape, parent: int | None = None) -> int:
        v = self.node(parent)
        for child in shape:
            self.shape(child, v)
        return v

    def structure(self) -> Structure:
        return Structure.build(TREE_SIGNATURE, self.size, {"E": self.edges})


def _check_range(h: int, i: int) -> None:
    if h < -1:
        raise DomainError(f"encodings need h >= -1, got {h}")
    if not 0 <= i < tower(h + 3):
        raise DomainError(f"{i} is outside [0, Tower({h + 3}) - 1]")


def _encode_into(
    b: _TreeBuilder, h: int, i: int, parent: int | None, slot_order: Sequence[int] | None = None
) -> int:
    if h == -1:
        return b.shape(BASE_SHAPES[i], parent)
    root = b.node(parent)
    level = [root]
    for _ in range(tower(h + 1) - 1):
        level = [b.node(p) for p in level for _ in range(2)]
    slots = [leaf for leaf in level for _ in range(2)]
    if slot_order is not None:
        if sorted(slot_order) != list(range(len(slots))):
            raise DomainError(f"slot order must be a permutation of 0..{len(slots) - 1}")
        slots = [slots[k] for k in slot_order]
    for j, leaf in zip(set_bits(i), slots):
        _encode_into(b, h - 1, j, leaf)
    return root


def encode_number(h: int, i: int, *, slot_order: Sequence[int] | None = None) -> Structure:
    """A member of B_h(i) rooted at element 0.

    Attachments for the set bits go, in ascending bit order, to the leftmost
    free slots below the complete part. ``slot_order`` permutes the slots of
    the top level to build other members of the same set.

    Raises:
        DomainError: If ``i`` is not in [0, Tower(h+3) - 1].
    """
    _check_range(h, i)
    b = _TreeBuilder()
    _encode_into(b, h, i, None, slot_order)
    logger.debug("B_%d(%d) has %d nodes", h, i, b.size)
    return b.structure()


def encode_forest(h: int, values: Sequence[int]) -> Structure:
    """The disjoint union of one encoding per value, roots in the given order."""
    if not values:
        raise DomainError("a forest needs at least one tree")
    b = _TreeBuilder()
    for i in values:
        _check_range(h, i)
        _encode_into(b, h, i, None)
    return b.structure()


def _digraph(F: Structure) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(F.universe)
    g.add_edges_from(F.rel("E"))
    return g


def is_binary_forest(F: Structure) -> bool:
    g = _digraph(F)
    return nx.is_branching(g) and all(d <= 2 for _, d in g.out_degree())


def roots(F: Structure) -> list[int]:
    """Nodes without a parent, in numeric order."""
    targets = {b for _, b in F.rel("E")}
    return [a for a in F.universe if a not in targets]


def height_of(T: Structure) -> int:
    """Length of a longest directed path."""
    g = _digraph(T)
    if not nx.is_directed_acyclic_graph(g):
        raise DomainError("height is only defined for acyclic structures")
    return nx.dag_longest_path_length(g)


class TreeDecoder:
    """Reads the numbers encoded below the nodes of one binary forest."""

    def __init__(self, F: Structure):
        if not is_binary_forest(F):
            raise DomainError("not a binary forest")
        self.F = F
        self.children: list[list[int]] = [[] for _ in F.universe]
        for a, b in sorted(F.rel("E")):
            self.children[a].append(b)
        self._memo: dict[tuple[int, int], int | None] = {}

    def _shape(self, a: int, depth: int = 0) -> Shape | None:
        if depth > 2:
            return None
        parts = [self._shape(c, depth + 1) for c in self.children[a]]
        if any(p is None for p in parts):
            return None
        return tuple(sorted(parts))

    def value(self, a: int, h: int) -> int | None:
        """The i with F_a in B_h(i), or None."""
        self.F.check_element(a)
        if h < -1 or h > MAX_DECODE_PARAMETER:
            return None
        key = (a, h)
        if key not in self._memo:
            self._memo[key] = self._value(a, h)
        return self._memo[key]

    def _value(self, a: int, h: int) -> int | None:
        if h == -1:
            shape = self._shape(a)
            return None if shape is None else _BASE_VALUE.get(shape)
        level = [a]
        for _ in range(tower(h + 1) - 1):
            nxt = []
            for v in level:
                if len(self.children[v]) != 2:
                    return None
                nxt.extend(self.children[v])
            level = nxt
        value = 0
        for v in level:
            for c in self.children[v]:
                j = self.value(c, h - 1)
                if j is None:
                    return None
                value |= 1 << j
        return value


def decode_number(T: Structure, h: int) -> int | None:
    """The unique i with T in B_h(i), or None when T is not such an encoding."""
    if not is_binary_forest(T):
        return None
    tops = roots(T)
    if len(tops) != 1:
        return None
    return TreeDecoder(T).value(tops[0], h)


def decode_roots(F: Structure, h: int) -> list[int | None]:
    """The number encoded at every root of ``F``, in root order."""
    decoder = TreeDecoder(F)
    return [decoder.value(a, h) for a in roots(F)]


def render_tree(F: Structure, h: int | None = None) -> Tree:
    """An indented rendering of ``F``; with ``h`` set, nodes show the number they encode."""
    decoder = TreeDecoder(F)

    def label(a: int) -> str:
        if h is None:
            return str(a)
        value = decoder.value(a, h)
        return str(a) if value is None else f"{a} [bold]= {value}[/bold]"

    top = Tree("forest")
    stack = [(top, a) for a in reversed(roots(F))]
    while stack:
        parent, a = stack.pop()
        node = parent.add(label(a))
        stack.extend((node, c) for c in reversed(decoder.children[a]))
    return top
