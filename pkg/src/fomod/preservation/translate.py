"""Quantifier elimination over an enumerated universe.

For a structure whose elements are listed as a_1, ..., a_M, a formula over
x1..xk and an index map s: [1,k] -> [1,M], ``translate_enumerated`` yields a
quantifier-free formula over y1..yM such that

    (A, a_s(1), ..., a_s(k)) ⊨ ψ   iff   (A, a_1, ..., a_M) ⊨ (ψ)_{M,s}.

Quantifiers become finite disjunctions and conjunctions over the M
positions; modulo quantifiers become a balanced counting formula.
"""
from __future__ import annotations

import itertools
import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import lru_cache

from fomod.errors import DomainError
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
    conj,
    disj,
)

_XVAR = re.compile(r"x([1-9]\d*)\Z")


def y(j: int) -> str:
    return f"y{j}"


def x_index(name: str) -> int:
    m = _XVAR.match(name)
    if m is None:
        raise DomainError(f"variable {name} is not of the form x<i>")
    return int(m.group(1))


@dataclass(frozen=True)
class IndexMap:
    """s: [1,k] -> [1,M], stored as ``targets[i-1] = s(i)``; 0 marks a position not yet assigned."""

    M: int
    targets: tuple[int, ...] = ()

    def __post_init__(self):
        if self.M < 1:
            raise DomainError("M must be positive")
        if any(not 0 <= j <= self.M for j in self.targets):
            raise DomainError(f"index map {self.targets} leaves [1,{self.M}]")

    @property
    def k(self) -> int:
        return len(self.targets)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.k or self.targets[i - 1] == 0:
            raise DomainError(f"x{i} is not in the domain of the index map")
        return self.targets[i - 1]

    def updated(self, i: int, j: int) -> IndexMap:
        """s[i -> j]."""
        targets = list(self.targets) + [0] * max(0, i - self.k)
        targets[i - 1] = j
        return IndexMap(self.M, tuple(targets))

    @classmethod
    def all_maps(cls, k: int, M: int) -> Iterator[IndexMap]:
        for targets in itertools.product(range(1, M + 1), repeat=k):
            yield cls(M, targets)


def _var(name: str, s: IndexMap) -> str:
    return y(s(x_index(name)))


def unsatisfiable() -> Formula:
    return Not(Eq("y1", "y1"))


def gamma_mod(family: Callable[[int], Formula], j: int, j2: int, m: int, p: int) -> Formula:
    """Holds iff the number of ℓ in [j, j2] with ``family(ℓ)`` true is ≡ p (mod m).

    Splits the range in the middle and sums residues, so the result has
    size |family|·(j2-j+1)^O(log m).
    """
    if m < 2:
        raise DomainError("modulus must be at least 2")
    if not 0 <= p < m:
        raise DomainError(f"residue {p} outside [0,{m})")
    if j > j2:
        raise DomainError("empty index range")

    @lru_cache(maxsize=None)
    def gamma(lo: int, hi: int, res: int) -> Formula:
        if lo == hi:
            match res:
                case 0:
                    return Not(family(lo))
                case 1:
                    return family(lo)
            return unsatisfiable()
        h = (lo + hi) // 2
        return disj(conj([gamma(lo, h, p1), gamma(h + 1, hi, (res - p1) % m)]) for p1 in range(m))

    return gamma(j, j2, p)


def translate_enumerated(psi: Formula, M: int, idx: IndexMap) -> Formula:
    """(ψ)_{M,s}: quantifier-free, over y1..yM."""
    if idx.M != M:
        raise DomainError(f"index map targets [1,{idx.M}], expected [1,{M}]")

    def go(phi: Formula, s: IndexMap) -> Formula:
        match phi:
            case Top() | Bottom():
                return phi
            case Atom(rel, args):
                return Atom(rel, tuple(_var(a, s) for a in args))
            case Eq(a, b):
                return Eq(_var(a, s), _var(b, s))
            case Not(body):
                return Not(go(body, s))
            case And(parts):
                return And(tuple(go(p, s) for p in parts))
            case Or(parts):
                return Or(tuple(go(p, s) for p in parts))
            case Implies(left, right):
                return Implies(go(left, s), go(right, s))
            case Iff(left, right):
                return Iff(go(left, s), go(right, s))
            case Exists(v, body):
                i = x_index(v)
                return disj(go(body, s.updated(i, j)) for j in range(1, M + 1))
            case Forall(v, body):
                i = x_index(v)
                return conj(go(body, s.updated(i, j)) for j in range(1, M + 1))
            case ModExists(mod, v, body):
                i = x_index(v)
                return gamma_mod(lambda j: go(body, s.updated(i, j)), 1, M, mod, 0)
        raise TypeError(f"not a formula node: {phi!r}")

    return go(psi, idx)


def standardize(phi: Formula) -> Formula:
    """Rename bound variables of a sentence by nesting depth to x1, x2, ..."""

    def go(node: Formula, env: dict[str, str], depth: int) -> Formula:
        match node:
            case Atom(rel, args):
                return Atom(rel, tuple(env.get(a, a) for a in args))
            case Eq(a, b):
                return Eq(env.get(a, a), env.get(b, b))
            case Not(body):
                return Not(go(body, env, depth))
            case And(parts):
                return And(tuple(go(p, env, depth) for p in parts))
            case Or(parts):
                return Or(tuple(go(p, env, depth) for p in parts))
            case Implies(left, right):
                return Implies(go(left, env, depth), go(right, env, depth))
            case Iff(left, right):
                return Iff(go(left, env, depth), go(right, env, depth))
            case Exists(v, body) | Forall(v, body) | ModExists(_, v, body):
                new = f"x{depth + 1}"
                inner = go(body, {**env, v: new}, depth + 1)
                match node:
                    case Exists():
                        return Exists(new, inner)
                    case Forall():
                        return Forall(new, inner)
                    case ModExists(mod, _, _):
                        return ModExists(mod, new, inner)
        return node

    return go(phi, {}, 0)
