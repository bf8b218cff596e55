"""Formula grammar.

    phi   := "true" | "false" | atom | "!" phi | "(" phi binop phi ")"
           | "E" VAR "." phi | "A" VAR "." phi
           | "Emod" INT VAR "." phi | "Ege" INT VAR "." phi
    binop := "&" | "|" | "->" | "<->"
    atom  := NAME "(" VAR ("," VAR)* ")" | VAR "=" VAR

``Ege`` is expanded by :func:`fomod.logic.sugar.at_least_k` while parsing.
"""
from __future__ import annotations

import re

import pyparsing as pp

from fomod.errors import ParseError
from fomod.logic.syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    ModExists,
    Not,
    Or,
    VarSupply,
    all_vars,
    children,
)
from fomod.logic.measures import relations_used
from fomod.logic.sugar import at_least_k
from fomod.model.signature import Signature

pp.ParserElement.enable_packrat()

KEYWORDS = ("Emod", "Ege", "E", "A", "true", "false")
_KEYWORD = pp.MatchFirst([pp.Keyword(k) for k in KEYWORDS])
VAR = ~_KEYWORD + pp.Word(pp.alphas + "_", pp.alphanums + "_")
NAME = pp.Word(pp.alphas, pp.alphanums + "_")
INT = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
LPAR, RPAR, DOT, BANG, EQUALS = map(pp.Suppress, "().!=")


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


def _ege(t):
    k, var, body = t
    return at_least_k(k, var, body, VarSupply(all_vars(body) | {var}))


FORMULA = pp.Forward()
_CONST = pp.Keyword("true").set_parse_action(lambda: TRUE) | pp.Keyword("false").set_parse_action(lambda: FALSE)
_ATOM = (NAME + LPAR + pp.Group(pp.DelimitedList(VAR)) + RPAR).set_parse_action(
    lambda t: Atom(t[0], tuple(t[1]))
)
_EQ = (VAR + EQUALS + VAR).set_parse_action(lambda t: Eq(t[0], t[1]))
_NEG = (BANG + FORMULA).set_parse_action(lambda t: Not(t[0]))
_BINARY = (LPAR + FORMULA + pp.one_of("<-> -> & |") + FORMULA + RPAR).set_parse_action(_binary)
_EXISTS = (pp.Suppress(pp.Keyword("E")) + VAR + DOT + FORMULA).set_parse_action(lambda t: Exists(t[0], t[1]))
_FORALL = (pp.Suppress(pp.Keyword("A")) + VAR + DOT + FORMULA).set_parse_action(lambda t: Forall(t[0], t[1]))
_MOD = (pp.Suppress(pp.Keyword("Emod")) + INT + VAR + DOT + FORMULA).set_parse_action(
    lambda t: ModExists(t[0], t[1], t[2])
)
_EGE = (pp.Suppress(pp.Keyword("Ege")) + INT + VAR + DOT + FORMULA).set_parse_action(_ege)
FORMULA <<= _CONST | _MOD | _EGE | _ATOM | _EXISTS | _FORALL | _NEG | _BINARY | _EQ
FORMULA_TEXT = FORMULA + pp.StringEnd()


def _locate(text: str, rel: str) -> tuple[int | None, int | None]:
    m = re.search(rf"(?<![A-Za-z0-9_]){re.escape(rel)}\s*\(", text)
    if m is None:
        return None, None
    return pp.lineno(m.start(), text), pp.col(m.start(), text)


def _atoms(phi: Formula):
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            yield node
        stack.extend(children(node))


def check_signature(phi: Formula, sig: Signature, text: str = "") -> None:
    """Every atom names a relation of ``sig`` with the right number of arguments."""
    for rel in sorted(relations_used(phi)):
        if rel not in sig:
            raise ParseError(f"unknown relation {rel!r}", *_locate(text, rel))
    for atom in _atoms(phi):
        if len(atom.args) != sig.arity(atom.rel):
            raise ParseError(
                f"relation {atom.rel} has arity {sig.arity(atom.rel)} but is applied to {len(atom.args)} variables",
                *_locate(text, atom.rel),
            )


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    try:
        phi = FORMULA_TEXT.parse_string(text, parse_all=True)[0]
    except pp.ParseException as exc:
        raise ParseError(f"formula syntax error: {exc.msg}", exc.lineno, exc.col) from None
    if sig is not None:
        check_signature(phi, sig, text)
    return phi
