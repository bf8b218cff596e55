"""Text format for signatures and structures.

    signature E/2 G/1
    structure A {
      universe 3
      E = {(0,1), (1,2)}
      G = {0, 2}          # unary tuples may be bare integers
    }

``#`` starts a comment that runs to the end of the line.
"""
from __future__ import annotations

from collections.abc import Sequence

import pyparsing as pp

from fomod.errors import DomainError, ParseError
from fomod.model.signature import Signature
from fomod.model.structure import Structure

pp.ParserElement.enable_packrat()

LBRACE, RBRACE, LPAR, RPAR, EQ, SLASH = map(pp.Suppress, "{}()=/")
NAME = pp.Word(pp.alphas, pp.alphanums + "_")
INT = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))

_TUPLE = pp.Group(LPAR + pp.DelimitedList(INT) + RPAR) | pp.Group(INT)
_RELDECL = pp.Group(NAME("name") + EQ + LBRACE + pp.Group(pp.Optional(pp.DelimitedList(_TUPLE)))("tuples") + RBRACE)
_STRUCTDECL = pp.Group(
    pp.Suppress(pp.Keyword("structure"))
    + NAME("name")
    + LBRACE
    + pp.Suppress(pp.Keyword("universe"))
    + INT("size")
    + pp.Group(pp.ZeroOrMore(_RELDECL))("rels")
    + RBRACE
)
_SIGDECL = pp.Suppress(pp.Keyword("signature")) + pp.Group(pp.OneOrMore(pp.Group(NAME + SLASH + INT)))("signature")
STRUCTURE_FILE = _SIGDECL + pp.Group(pp.ZeroOrMore(_STRUCTDECL))("structures") + pp.StringEnd()
STRUCTURE_FILE.ignore(pp.python_style_comment)


def parse_structures(text: str) -> list[tuple[str, Structure]]:
    """Parse a structure file into ``(name, structure)`` pairs in file order."""
    try:
        result = STRUCTURE_FILE.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise ParseError(f"structure syntax error: {exc.msg}", exc.lineno, exc.col) from None
    sig = Signature(tuple((name, arity) for name, arity in result["signature"]))
    out = []
    for decl in result["structures"]:
        rels: dict[str, list[tuple[int, ...]]] = {}
        for rel in decl["rels"]:
            if rel["name"] in rels:
                raise DomainError(f"relation {rel['name']} listed twice in structure {decl['name']}")
            rels[rel["name"]] = [tuple(t) for t in rel["tuples"]]
        out.append((decl["name"], Structure.build(sig, decl["size"], rels)))
    return out


def parse_structure(text: str) -> Structure:
    """The first structure of a file."""
    items = parse_structures(text)
    if not items:
        raise DomainError("no structure in input")
    return items[0][1]


def _format_tuple(t: tuple[int, ...]) -> str:
    if len(t) == 1:
        return str(t[0])
    return "(" + ",".join(str(x) for x in t) + ")"


def format_signature(sig: Signature) -> str:
    return "signature " + " ".join(f"{n}/{a}" for n, a in sig.relations)


def format_structure_block(name: str, A: Structure) -> str:
    lines = [f"structure {name} {{", f"  universe {A.size}"]
    for rel_name, tuples in A.items():
        body = ", ".join(_format_tuple(t) for t in sorted(tuples))
        lines.append(f"  {rel_name} = {{{body}}}")
    lines.append("}")
    return "\n".join(lines)


def format_structures(items: Sequence[tuple[str, Structure]], comment: str | None = None) -> str:
    """Print structures sharing one signature; ``comment`` becomes a trailing ``#`` line."""
    if not items:
        raise DomainError("nothing to format")
    sig = items[0][1].signature
    if any(A.signature != sig for _, A in items):
        raise DomainError("structures in one file must share a signature")
    parts = [format_signature(sig)] + [format_structure_block(n, A) for n, A in items]
    if comment:
        parts.append("\n".join(f"# {line}" for line in comment.splitlines()))
    return "\n".join(parts) + "\n"


def format_structure(A: Structure, name: str = "A", comment: str | None = None) -> str:
    return format_structures([(name, A)], comment)


def product_comment(sizes: Sequence[int]) -> str:
    dims = " x ".join(str(s) for s in sizes)
    return f"direct product {dims}: element (a_1,...,a_s) has index sum_i a_i * prod_(j>i) |A_j| (row-major)"
