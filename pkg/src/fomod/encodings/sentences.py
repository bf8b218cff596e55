"""Sentences with large minimal models, and the two path-colouring counterexamples.

The preservation sentences live over ordered binary forests. A fixed
1-transduction reads an unordered binary forest out of the ordered one:
x has child y when y is x's left successor and x is marked V_0, or y is
its right successor and x is marked V_1. In the coloured variant the
marks are the four blocks V_e, V_0, V_1, V_01 of a partition, named after
the set of directions they open.
"""
from __future__ import annotations

import logging

from fomod.encodings.formulas import FormulaFactory, gen_gamma_ordered, root
from fomod.encodings.tower import tower
from fomod.errors import DomainError
from fomod.fv.transduction import Transduction, apply_transduction_formula
from fomod.logic.measures import free_vars
from fomod.logic.sugar import distinct
from fomod.logic.syntax import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    conj,
    disj,
    exists_many,
    substitute,
)
from fomod.model.signature import Signature

logger = logging.getLogger(__name__)

ORDERED_SIGNATURE = Signature.of(("S_0", 2), ("S_1", 2), ("V_0", 1), ("V_1", 1))
COLOURS: dict[str, frozenset[int]] = {
    "V_e": frozenset(),
    "V_0": frozenset({0}),
    "V_1": frozenset({1}),
    "V_01": frozenset({0, 1}),
}
COLOURED_SIGNATURE = Signature.of(("S_0", 2), ("S_1", 2), *((name, 1) for name in COLOURS))
PATH_SIGNATURE = Signature.of(("E", 2), ("G", 1))


def _successor(i: int) -> Formula:
    return Atom(f"S_{i}", ("x1_1", "x2_1"))


ORDERED_VIEW = Transduction(
    1,
    Eq("x1", "x1"),
    (("E", 2, disj(And((_successor(i), Atom(f"V_{i}", ("x1_1",)))) for i in (0, 1))),),
)

COLOURED_VIEW = Transduction(
    1,
    Eq("x1", "x1"),
    (
        (
            "E",
            2,
            disj(
                And((_successor(i), disj(Atom(name, ("x1_1",)) for name, m in COLOURS.items() if i in m)))
                for i in (0, 1)
            ),
        ),
    ),
)


def interpret(phi: Formula, *, coloured: bool = False) -> Formula:
    """Θ(φ) with the free variables of φ keeping their names."""
    view = COLOURED_VIEW if coloured else ORDERED_VIEW
    out = apply_transduction_formula(view, phi)
    return substitute(out, {f"{v}_1": v for v in free_vars(phi)})


def _lower_bound_sentence(h: int, coloured: bool) -> Formula:
    if h < -1:
        raise DomainError(f"encodings need h >= -1, got {h}")
    f = FormulaFactory(avoid=("x", "y"))
    guard_depth = 2 * tower(h + 1)

    def protected(v: str) -> Formula:
        return And((interpret(f.enc(h, v), coloured=coloured), gen_gamma_ordered(guard_depth, v)))

    start = Exists("x", And((protected("x"), interpret(f.min(h, "x"), coloured=coloured))))
    step = Or(
        (
            interpret(f.max(h, "x"), coloured=coloured),
            Exists("y", And((protected("y"), interpret(f.succ(h, "x", "y"), coloured=coloured)))),
        )
    )
    phi = And((start, Forall("x", Implies(protected("x"), step))))
    logger.debug("lower-bound sentence for h=%d built", h)
    return phi


def gen_phi_ext(h: int) -> Formula:
    """A sentence over S_0, S_1, V_0, V_1 whose models hold encodings of all of 0..Tower(h+3)-1.

    For h > 1 it is preserved under extensions on ordered binary forests;
    for smaller h the same shape is produced.
    """
    return _lower_bound_sentence(h, coloured=False)


def gen_phi_hom(h: int) -> Formula:
    """The coloured counterpart of :func:`gen_phi_ext`, preserved under homomorphisms for h > 1."""
    return _lower_bound_sentence(h, coloured=True)


def gen_phi_fv(h: int) -> Formula:
    """Every root of the forest has a different root encoding the same number.

    ∀x (root(x) → ∃y (root(y) ∧ eq_h(x,y) ∧ ¬x=y))
    """
    f = FormulaFactory(avoid=("x", "y"))
    partner = And((root("y", fresh=f.fresh()), f.eq(h, "x", "y"), Not(Eq("x", "y"))))
    return Forall("x", Implies(root("x", fresh=f.fresh()), Exists("y", partner)))


def _endpoint(x: str, y: str) -> Formula:
    return Or((Not(Exists(y, Atom("E", (y, x)))), Not(Exists(y, Atom("E", (x, y))))))


def endpoints_green() -> Formula:
    """At least three elements, and every endpoint is green."""
    xs = ("x1", "x2", "x3")
    three = exists_many(xs, distinct(xs))
    return And((three, Forall("x", Implies(_endpoint("x", "y"), Atom("G", ("x",))))))


def green_endpoint() -> Formula:
    """Some endpoint is green."""
    return Exists("x", conj([Atom("G", ("x",)), _endpoint("x", "y")]))
