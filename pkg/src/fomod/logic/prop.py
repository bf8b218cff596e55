"""Propositional formulas over the variables X_i_j of reduction sequences.

Connectives are the FO node classes; only the leaves differ.
"""
from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass

import pyparsing as pp

from fomod.errors import DomainError, ParseError
from fomod.logic.syntax import (
    FALSE,
    TRUE,
    And,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    children,
)

pp.ParserElement.enable_packrat()

_PROP_NAME = re.compile(r"X_(\d+)_(\d+)\Z")


class Leaf(Formula):
    """A named propositional variable; subclasses provide ``name``."""

    __slots__ = ()

    name: str


@dataclass(frozen=True)
class Prop(Leaf):
    """Proposition X_i_j: the j-th formula of component i (both 1-based)."""

    component: int
    index: int

    def __post_init__(self):
        if self.component < 1 or self.index < 1:
            raise DomainError("proposition indices are 1-based")

    @property
    def name(self) -> str:
        return f"X_{self.component}_{self.index}"

    @classmethod
    def from_name(cls, name: str) -> Prop:
        m = _PROP_NAME.match(name)
        if m is None:
            raise ParseError(f"bad proposition name {name!r}, expected X_<i>_<j>")
        return cls(int(m.group(1)), int(m.group(2)))


PropFormula = Formula


def eval_prop(beta: PropFormula, truth: Mapping[str, bool] | Mapping[Prop, bool]) -> bool:
    """μ ⊨ β. ``truth`` may be keyed by names (``"X_1_1"``) or by :class:`Prop`."""
    match beta:
        case Top():
            return True
        case Bottom():
            return False
        case Leaf():
            if beta in truth:
                return bool(truth[beta])
            if beta.name in truth:
                return bool(truth[beta.name])
            raise DomainError(f"proposition {beta.name} is unassigned")
        case Not(body):
            return not eval_prop(body, truth)
        case And(parts):
            return all(eval_prop(p, truth) for p in parts)
        case Or(parts):
            return any(eval_prop(p, truth) for p in parts)
        case Implies(left, right):
            return not eval_prop(left, truth) or eval_prop(right, truth)
        case Iff(left, right):
            return eval_prop(left, truth) == eval_prop(right, truth)
    raise DomainError(f"not a propositional formula: {beta!r}")


def props_used(beta: PropFormula) -> frozenset[Leaf]:
    own = {beta} if isinstance(beta, Leaf) else set()
    return frozenset(own).union(*(props_used(c) for c in children(beta)))


def substitute_props(beta: PropFormula, mapping: Mapping[Leaf, Formula]) -> Formula:
    """Replace leaves; the Boolean skeleton is kept node for node."""
    match beta:
        case Leaf():
            return mapping.get(beta, beta)
        case Not(body):
            return Not(substitute_props(body, mapping))
        case And(parts):
            return And(tuple(substitute_props(p, mapping) for p in parts))
        case Or(parts):
            return Or(tuple(substitute_props(p, mapping) for p in parts))
        case Implies(left, right):
            return Implies(substitute_props(left, mapping), substitute_props(right, mapping))
        case Iff(left, right):
            return Iff(substitute_props(left, mapping), substitute_props(right, mapping))
    return beta


def _binary(t):
    left, op, right = t
    match op:
        case "&":
            return And((left, right))
        case "|":
            return Or((left, right))
        case "->":
            return Implies(left, right)
        case "<->":
            return Iff(left, right)


PROP = pp.Forward()
_LEAF = (
    pp.Keyword("true").set_parse_action(lambda: TRUE)
    | pp.Keyword("false").set_parse_action(lambda: FALSE)
    | pp.Regex(r"X_\d+_\d+").set_parse_action(lambda t: Prop.from_name(t[0]))
)
PROP <<= (
    _LEAF
    | (pp.Suppress("!") + PROP).set_parse_action(lambda t: Not(t[0]))
    | (pp.Suppress("(") + PROP + pp.one_of("<-> -> & |") + PROP + pp.Suppress(")")).set_parse_action(_binary)
)


def parse_prop(text: str) -> PropFormula:
    try:
        return (PROP + pp.StringEnd()).parse_string(text, parse_all=True)[0]
    except pp.ParseException as exc:
        raise ParseError(f"propositional syntax error: {exc.msg}", exc.lineno, exc.col) from None
