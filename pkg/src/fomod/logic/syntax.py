"""Abstract syntax of FO+MOD formulas.

Nodes are frozen dataclasses. ``And``/``Or`` are n-ary with at least two
parts; a first part of the same connective is spliced into its parent so
that the left-nested printed form parses back to the same tree.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from fomod.errors import DomainError


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from fomod.logic.printer import print_formula

        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


def _splice(cls, parts: Iterable[Formula]) -> tuple[Formula, ...]:
    parts = tuple(parts)
    if len(parts) < 2:
        raise DomainError(f"{cls.__name__} needs at least two parts")
    if isinstance(parts[0], cls):
        return parts[0].parts + parts[1:]
    return parts


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", _splice(And, self.parts))


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", _splice(Or, self.parts))


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ModExists(Formula):
    """∃^{0 mod m} var body: the number of witnesses is a multiple of ``m``."""

    m: int
    var: str
    body: Formula

    def __post_init__(self):
        if self.m < 2:
            raise DomainError(f"modulus must be at least 2, got {self.m}")


Quantifier = Exists | Forall | ModExists


def conj(parts: Iterable[Formula]) -> Formula:
    """⋀ parts; TRUE for none, the part itself for one."""
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    """⋁ parts; FALSE for none, the part itself for one."""
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def exists_many(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Exists(v, body)
    return body


def forall_many(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Forall(v, body)
    return body


def children(phi: Formula) -> tuple[Formula, ...]:
    match phi:
        case Not(body) | Exists(_, body) | Forall(_, body) | ModExists(_, _, body):
            return (body,)
        case And(parts) | Or(parts):
            return parts
        case Implies(left, right) | Iff(left, right):
            return (left, right)
    return ()


def all_vars(phi: Formula) -> set[str]:
    """Every variable name occurring in ``phi``, free or bound."""
    out: set[str] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        match node:
            case Atom(_, args):
                out.update(args)
            case Eq(a, b):
                out.update((a, b))
            case Exists(v, _) | Forall(v, _) | ModExists(_, v, _):
                out.add(v)
        stack.extend(children(node))
    return out


class VarSupply:
    """Fresh variable names that avoid a growing set of taken names."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "v"):
        self.taken = set(avoid)
        self.prefix = prefix
        self._counter = itertools.count(1)

    def reserve(self, names: Iterable[str]) -> None:
        self.taken.update(names)

    def fresh(self, prefix: str | None = None) -> str:
        prefix = prefix or self.prefix
        while True:
            name = f"{prefix}{next(self._counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def substitute(phi: Formula, mapping: Mapping[str, str], supply: VarSupply | None = None) -> Formula:
    """Rename free variables by ``mapping``, renaming bound variables that would capture."""
    if supply is None:
        supply = VarSupply(all_vars(phi) | set(mapping) | set(mapping.values()), prefix="w")

    def go(node: Formula, m: Mapping[str, str]) -> Formula:
        if not m:
            return node
        match node:
            case Atom(rel, args):
                return Atom(rel, tuple(m.get(a, a) for a in args))
            case Eq(a, b):
                return Eq(m.get(a, a), m.get(b, b))
            case Not(body):
                return Not(go(body, m))
            case And(parts):
                return And(tuple(go(p, m) for p in parts))
            case Or(parts):
                return Or(tuple(go(p, m) for p in parts))
            case Implies(left, right):
                return Implies(go(left, m), go(right, m))
            case Iff(left, right):
                return Iff(go(left, m), go(right, m))
            case Exists(v, body) | Forall(v, body) | ModExists(_, v, body):
                inner = {k: w for k, w in m.items() if k != v}
                if v in inner.values():
                    new_v = supply.fresh()
                    inner[v] = new_v
                    v = new_v
                new_body = go(body, inner)
                match node:
                    case Exists():
                        return Exists(v, new_body)
                    case Forall():
                        return Forall(v, new_body)
                    case ModExists(mod, _, _):
                        return ModExists(mod, v, new_body)
        return node

    return go(phi, dict(mapping))
