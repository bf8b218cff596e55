"""Inverse of the formula parser: n-ary connectives print left-nested."""
from __future__ import annotations

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
)


def _nested(parts: list[str], op: str) -> str:
    return "(" * (len(parts) - 1) + parts[0] + "".join(f" {op} {p})" for p in parts[1:])


def print_formula(phi: Formula) -> str:
    match phi:
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Atom(rel, args):
            return f"{rel}({','.join(args)})"
        case Eq(a, b):
            return f"{a}={b}"
        case Not(body):
            return "!" + print_formula(body)
        case And(parts):
            return _nested([print_formula(p) for p in parts], "&")
        case Or(parts):
            return _nested([print_formula(p) for p in parts], "|")
        case Implies(left, right):
            return f"({print_formula(left)} -> {print_formula(right)})"
        case Iff(left, right):
            return f"({print_formula(left)} <-> {print_formula(right)})"
        case Exists(v, body):
            return f"E {v}. {print_formula(body)}"
        case Forall(v, body):
            return f"A {v}. {print_formula(body)}"
        case ModExists(m, v, body):
            return f"Emod {m} {v}. {print_formula(body)}"
    # propositional atoms and other leaf extensions print by name
    name = getattr(phi, "name", None)
    if name is not None:
        return name
    raise TypeError(f"cannot print {phi!r}")
