"""Syntactic measures: quantifier rank, free variables, length, fragment checks."""
from __future__ import annotations

import math
from functools import reduce

from fomod.logic.syntax import (
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    ModExists,
    Not,
    Or,
    Top,
    children,
)
from fomod.logic.prop import Leaf


def qr(phi: Formula) -> int:
    """Maximum nesting depth of first-order and modulo quantifiers."""
    match phi:
        case Exists(_, body) | Forall(_, body) | ModExists(_, _, body):
            return 1 + qr(body)
    return max((qr(c) for c in children(phi)), default=0)


def free_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Atom(_, args):
            return frozenset(args)
        case Eq(a, b):
            return frozenset((a, b))
        case Exists(v, body) | Forall(v, body) | ModExists(_, v, body):
            return free_vars(body) - {v}
    return frozenset().union(*(free_vars(c) for c in children(phi)))


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def size(phi: Formula) -> int:
    """Length of the formula as a word.

    One token per relation symbol, variable, comma, parenthesis, connective,
    quantifier symbol and constant; ``∃^{0 mod m}`` is a single quantifier
    symbol. A k-ary atom ``R(x1,...,xk)`` has 2k+2 tokens.
    """
    match phi:
        case Top() | Bottom() | Leaf():
            return 1
        case Atom(_, args):
            return 2 * len(args) + 2
        case Eq():
            return 3
        case Not(body):
            return 1 + size(body)
        case And(parts) | Or(parts):
            return 3 * (len(parts) - 1) + sum(size(p) for p in parts)
        case Implies(left, right) | Iff(left, right):
            return 3 + size(left) + size(right)
        case Exists(_, body) | Forall(_, body) | ModExists(_, _, body):
            return 2 + size(body)
    raise TypeError(f"not a formula node: {phi!r}")


def is_quantifier_free(phi: Formula) -> bool:
    match phi:
        case Exists() | Forall() | ModExists():
            return False
    return all(is_quantifier_free(c) for c in children(phi))


def is_existential(phi: Formula, positive: bool = True) -> bool:
    """Whether ``phi`` prenexes to ∃x̄ ψ with ψ quantifier-free.

    Every ∃ must sit under an even number of negations and every ∀ under an
    odd number; ``->`` negates its left side. Modulo quantifiers and
    quantifiers below ``<->`` are never accepted.
    """
    if is_quantifier_free(phi):
        return True
    match phi:
        case Not(body):
            return is_existential(body, not positive)
        case And(parts) | Or(parts):
            return all(is_existential(p, positive) for p in parts)
        case Implies(left, right):
            return is_existential(left, not positive) and is_existential(right, positive)
        case Exists(_, body) if positive:
            return is_existential(body, positive)
        case Forall(_, body) if not positive:
            return is_existential(body, positive)
    return False


def is_existential_positive(phi: Formula) -> bool:
    """Existential and free of ¬, → and ↔. ``false`` counts as existential-positive."""
    match phi:
        case Top() | Bottom() | Atom() | Eq():
            return True
        case And(parts) | Or(parts):
            return all(is_existential_positive(p) for p in parts)
        case Exists(_, body):
            return is_existential_positive(body)
    return False


def moduli(phi: Formula) -> frozenset[int]:
    own = {phi.m} if isinstance(phi, ModExists) else set()
    return frozenset(own).union(*(moduli(c) for c in children(phi)))


def moduli_lcm(phi: Formula) -> int:
    """lcm of all moduli in ``phi``; 1 when it has no modulo quantifiers."""
    return reduce(math.lcm, moduli(phi), 1)


def relations_used(phi: Formula) -> frozenset[str]:
    own = {phi.rel} if isinstance(phi, Atom) else set()
    return frozenset(own).union(*(relations_used(c) for c in children(phi)))
