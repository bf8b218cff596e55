"""FO(E) formulas for distances in binary forests and arithmetic on tree encodings.

All formulas are generated by a :class:`FormulaFactory`, which hands out
fresh bound variables (``z1``, ``z2``, ...) so that no construction needs
capture-avoiding substitution. Free variables are supplied by the caller.

Sizes grow like log d for the distance formulas and like Tower(h) for the
arithmetic families, because every level refers to the level below a
constant number of times and to distance formulas of logarithmic size.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable
from functools import partial

from fomod.errors import DomainError
from fomod.encodings.tower import tower
from fomod.logic.syntax import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    VarSupply,
    disj,
)

EdgeFn = Callable[[str, str], Formula]


def tree_edge(a: str, b: str) -> Formula:
    return Atom("E", (a, b))


def ordered_edge(a: str, b: str) -> Formula:
    """Left or right successor in an ordered forest."""
    return Or((Atom("S_0", (a, b)), Atom("S_1", (a, b))))


def ordered_children(y: str, z0: str, z1: str) -> Formula:
    return And((Atom("S_0", (y, z0)), Atom("S_1", (y, z1)), Not(Eq(z0, z1))))


def root(x: str = "x", *, fresh: str = "y") -> Formula:
    """root(x) := ¬∃y E(y,x)."""
    return Not(Exists(fresh, tree_edge(fresh, x)))


class FormulaFactory:
    """Builds the distance, completeness and encoding formulas.

    Attributes:
        edge: The edge formula distances are measured along.
        children: ``children(y, z0, z1)`` says z0 and z1 are the two children of y;
            defaults to two distinct ``edge`` successors.
    """

    def __init__(
        self,
        edge: EdgeFn = tree_edge,
        children: Callable[[str, str, str], Formula] | None = None,
        avoid: Iterable[str] = (),
    ):
        self.edge = edge
        self.children = children or (lambda y, z0, z1: And((edge(y, z0), edge(y, z1), Not(Eq(z0, z1)))))
        self.supply = VarSupply(avoid, prefix="z")

    def fresh(self) -> str:
        return self.supply.fresh()

    # -- distances ---------------------------------------------------------

    def dist_le(self, d: int, x: str, y: str) -> Formula:
        """δ_{≤d}(x,y): a directed path of length at most d leads from x to y."""
        if d < 0:
            raise DomainError(f"distance bound must be non-negative, got {d}")
        if d == 0:
            return Eq(x, y)
        if d == 1:
            return Or((Eq(x, y), self.edge(x, y)))
        z = self.fresh()
        if d % 2:
            return Exists(z, And((self.dist_le(1, x, z), self.dist_le(d - 1, z, y))))
        x2, y2 = self.fresh(), self.fresh()
        pinned = Or((And((Eq(x2, x), Eq(y2, z))), And((Eq(x2, z), Eq(y2, y)))))
        return Exists(z, Forall(x2, Forall(y2, Implies(pinned, self.dist_le(d // 2, x2, y2)))))

    def dist_eq(self, d: int, x: str, y: str) -> Formula:
        """δ_{=d}(x,y) := δ_{≤d}(x,y) ∧ ¬δ_{≤d-1}(x,y)."""
        if d == 0:
            return Eq(x, y)
        return And((self.dist_le(d, x, y), Not(self.dist_le(d - 1, x, y))))

    def gamma(self, d: int, x: str) -> Formula:
        """γ_d(x): the first d levels below x form a complete binary tree of depth d."""
        if d < 0:
            raise DomainError(f"depth must be non-negative, got {d}")
        y = self.fresh()
        deep = Exists(y, self.dist_eq(d, x, y))
        if d == 0:
            return deep
        y, z0, z1 = self.fresh(), self.fresh(), self.fresh()
        full = Forall(y, Implies(self.dist_le(d - 1, x, y), Exists(z0, Exists(z1, self.children(y, z0, z1)))))
        return And((deep, full))

    # -- the four base shapes ------------------------------------------------

    def _only_child(self, x: str, inner: Callable[[str], Formula]) -> Formula:
        y, w = self.fresh(), self.fresh()
        return Exists(y, And((self.edge(x, y), Forall(w, Implies(self.edge(x, w), Eq(w, y))), inner(y))))

    def base(self, i: int, x: str) -> Formula:
        """enc_{-1,i}(x): the tree below x has the fixed shape of B_{-1}(i)."""
        match i:
            case 0:
                y = self.fresh()
                return Not(Exists(y, self.edge(x, y)))
            case 1:
                return self._only_child(x, partial(self.base, 0))
            case 2:
                return self._only_child(x, partial(self.base, 1))
            case 3:
                y, z, w = self.fresh(), self.fresh(), self.fresh()
                body = And(
                    (
                        self.edge(x, y),
                        self.edge(x, z),
                        self.base(0, y),
                        self.base(1, z),
                        Forall(w, Implies(self.edge(x, w), Or((Eq(w, y), Eq(w, z))))),
                    )
                )
                return Exists(y, Exists(z, body))
        raise DomainError(f"base shapes exist for 0..3, got {i}")

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _check(h: int) -> int:
        if h < -1:
            raise DomainError(f"encodings need h >= -1, got {h}")
        return -1 if h == -1 else tower(h + 1)

    def enc(self, h: int, x: str) -> Formula:
        """enc_h(x): the tree below x is a member of some B_h(i)."""
        T = self._check(h)
        if h == -1:
            return disj(self.base(i, x) for i in range(4))
        y = self.fresh()
        return And((self.gamma(T - 1, x), Forall(y, Implies(self.dist_eq(T, x, y), self.enc(h - 1, y)))))

    def min(self, h: int, x: str) -> Formula:
        """min_h(x): x encodes 0."""
        T = self._check(h)
        if h == -1:
            return self.base(0, x)
        y = self.fresh()
        return Not(Exists(y, self.dist_eq(T, x, y)))

    def eq(self, h: int, x: str, y: str) -> Formula:
        """eq_h(x,y): x and y encode the same number.

        The inner ∀u∀v lets the comparison at level h-1 appear only once.
        """
        T = self._check(h)
        if h == -1:
            return disj(And((self.base(i, x), self.base(i, y))) for i in range(4))
        x1, y1 = self.fresh(), self.fresh()
        same_emptiness = Iff(Exists(x1, self.dist_eq(T, x, x1)), Exists(y1, self.dist_eq(T, y, y1)))
        x1, y1, y2, x2, u, v = (self.fresh() for _ in range(6))
        pinned = Or((And((Eq(u, x1), Eq(v, y1))), And((Eq(u, x2), Eq(v, y2)))))
        shared = Forall(u, Forall(v, Implies(pinned, self.eq(h - 1, u, v))))
        inner = Forall(y2, Implies(self.dist_eq(T, y, y2), Exists(x2, And((self.dist_eq(T, x, x2), shared)))))
        matched = Forall(x1, Implies(self.dist_eq(T, x, x1), Exists(y1, And((self.dist_eq(T, y, y1), inner)))))
        return And((same_emptiness, matched))

    def less(self, h: int, x: str, y: str) -> Formula:
        """less_h(x,y): the number at x is smaller than the number at y."""
        T = self._check(h)
        if h == -1:
            return disj(And((self.base(i, x), self.base(j, y))) for i in range(4) for j in range(i + 1, 4))
        y1, x1, x2, y2 = (self.fresh() for _ in range(4))
        absent = Forall(x1, Implies(self.dist_eq(T, x, x1), Not(self.eq(h - 1, x1, y1))))
        above = Forall(
            x2,
            Implies(
                And((self.dist_eq(T, x, x2), self.less(h - 1, y1, x2))),
                Exists(y2, And((self.dist_eq(T, y, y2), self.eq(h - 1, y2, x2)))),
            ),
        )
        return Exists(y1, And((self.dist_eq(T, y, y1), absent, above)))

    def succ(self, h: int, x: str, y: str) -> Formula:
        """succ_h(x,y): the number at y is one more than the number at x.

        y1 is the lowest bit of y; it is missing from x, both agree above it,
        and below it x has the contiguous bits 0..y1-1.
        """
        T = self._check(h)
        if h == -1:
            return disj(And((self.base(i, x), self.base(i + 1, y))) for i in range(3))
        y1 = self.fresh()
        y2 = self.fresh()
        lowest = Forall(
            y2,
            Implies(And((self.dist_eq(T, y, y2), Not(self.eq(h - 1, y2, y1)))), self.less(h - 1, y1, y2)),
        )
        x1 = self.fresh()
        missing = Forall(x1, Implies(self.dist_eq(T, x, x1), Not(self.eq(h - 1, x1, y1))))
        y3, x3 = self.fresh(), self.fresh()
        y_above_in_x = Forall(
            y3,
            Implies(
                And((self.dist_eq(T, y, y3), self.less(h - 1, y1, y3))),
                Exists(x3, And((self.dist_eq(T, x, x3), self.eq(h - 1, x3, y3)))),
            ),
        )
        x4, y4 = self.fresh(), self.fresh()
        x_above_in_y = Forall(
            x4,
            Implies(
                And((self.dist_eq(T, x, x4), self.less(h - 1, y1, x4))),
                Exists(y4, And((self.dist_eq(T, y, y4), self.eq(h - 1, y4, x4)))),
            ),
        )
        x5, x6, z = self.fresh(), self.fresh(), self.fresh()
        has_zero = Exists(x5, And((self.dist_eq(T, x, x5), self.min(h - 1, x5))))
        carries = Forall(
            x6,
            Implies(
                And((self.dist_eq(T, x, x6), self.less(h - 1, x6, y1))),
                Exists(z, And((self.succ(h - 1, x6, z), Or((Eq(z, y1), self.dist_eq(T, x, z)))))),
            ),
        )
        run = Implies(Not(self.min(h - 1, y1)), And((has_zero, carries)))
        body = And((self.dist_eq(T, y, y1), lowest, missing, y_above_in_x, x_above_in_y, run))
        return Exists(y1, body)

    def max(self, h: int, x: str) -> Formula:
        """max_h(x): x encodes Tower(h+3) - 1."""
        T = self._check(h)
        if h == -1:
            return self.base(3, x)
        y1, y2, z = self.fresh(), self.fresh(), self.fresh()
        has_zero = Exists(y1, And((self.dist_eq(T, x, y1), self.min(h - 1, y1))))
        closed = Forall(
            y2,
            Implies(
                self.dist_eq(T, x, y2),
                Or((self.max(h - 1, y2), Exists(z, And((self.dist_eq(T, x, z), self.succ(h - 1, y2, z)))))),
            ),
        )
        return And((has_zero, closed))


def gen_dist_le(d: int, x: str = "x", y: str = "y") -> Formula:
    return FormulaFactory(avoid=(x, y)).dist_le(d, x, y)


def gen_dist_eq(d: int, x: str = "x", y: str = "y") -> Formula:
    return FormulaFactory(avoid=(x, y)).dist_eq(d, x, y)


def gen_gamma(d: int, x: str = "x") -> Formula:
    return FormulaFactory(avoid=(x,)).gamma(d, x)


def gen_gamma_ordered(d: int, x: str = "x") -> Formula:
    """γ^<_d(x): the first d levels below x form a complete ordered binary tree."""
    return FormulaFactory(ordered_edge, ordered_children, avoid=(x,)).gamma(d, x)


def gen_enc(h: int, x: str = "x") -> Formula:
    return FormulaFactory(avoid=(x,)).enc(h, x)


def gen_min(h: int, x: str = "x") -> Formula:
    return FormulaFactory(avoid=(x,)).min(h, x)


def gen_max(h: int, x: str = "x") -> Formula:
    return FormulaFactory(avoid=(x,)).max(h, x)


def gen_eq(h: int, x: str = "x", y: str = "y") -> Formula:
    return FormulaFactory(avoid=(x, y)).eq(h, x, y)


def gen_less(h: int, x: str = "x", y: str = "y") -> Formula:
    return FormulaFactory(avoid=(x, y)).less(h, x, y)


def gen_succ(h: int, x: str = "x", y: str = "y") -> Formula:
    return FormulaFactory(avoid=(x, y)).succ(h, x, y)
