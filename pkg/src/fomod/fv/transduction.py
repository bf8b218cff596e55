"""t-transductions: structures defined inside t-th powers of a host structure.

The universe formula ``theta`` uses the variables x1..xt; the formula for a
target relation R of arity r uses x<i>_<j> for coordinate j of argument i.

    transduction {
      t = 2 ;
      theta = (P_1(x1) & P_2(x2)) ;
      relation E/2 = (E(x1_1,x2_1) & E(x1_2,x2_2)) ;
    }
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import pyparsing as pp

from fomod.budget import Budget
from fomod.errors import DomainError, ParseError, UnsupportedError
from fomod.fv.decompose import decompose
from fomod.fv.reduction import ReductionSequence
from fomod.logic.evaluate import ModelChecker, satisfying_tuples
from fomod.logic.measures import free_vars, qr
from fomod.logic.parser import FORMULA, check_signature
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
    VarSupply,
    all_vars,
    conj,
    exists_many,
    substitute,
)
from fomod.model.nu import DegreeBound, ExplicitTable
from fomod.model.signature import Signature, partition_name
from fomod.model.structure import Structure
from fomod.reports import HnfCertificate

logger = logging.getLogger(__name__)


def theta_vars(t: int) -> tuple[str, ...]:
    return tuple(f"x{j}" for j in range(1, t + 1))


def relation_vars(arity: int, t: int) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(f"x{i}_{j}" for j in range(1, t + 1)) for i in range(1, arity + 1))


@dataclass(frozen=True)
class Transduction:
    t: int
    theta: Formula
    relations: tuple[tuple[str, int, Formula], ...]

    def __post_init__(self):
        if self.t < 1:
            raise DomainError("t must be positive")
        extra = free_vars(self.theta) - set(theta_vars(self.t))
        if extra:
            raise DomainError(f"theta has free variables {sorted(extra)} outside x1..x{self.t}")
        for name, arity, phi in self.relations:
            allowed = {v for group in relation_vars(arity, self.t) for v in group}
            extra = free_vars(phi) - allowed
            if extra:
                raise DomainError(f"formula of {name} has free variables {sorted(extra)}")

    @property
    def target(self) -> Signature:
        return Signature(tuple((name, arity) for name, arity, _ in self.relations))

    def relation(self, name: str) -> tuple[int, Formula]:
        for n, arity, phi in self.relations:
            if n == name:
                return arity, phi
        raise DomainError(f"transduction defines no relation {name}")

    @property
    def parameter_rank(self) -> int:
        """p: the largest quantifier rank among theta and the relation formulas."""
        return max([qr(self.theta)] + [qr(phi) for _, _, phi in self.relations])

    def format(self) -> str:
        lines = ["transduction {", f"  t = {self.t} ;", f"  theta = {self.theta} ;"]
        lines += [f"  relation {name}/{arity} = {phi} ;" for name, arity, phi in self.relations]
        lines.append("}")
        return "\n".join(lines) + "\n"


def apply_transduction_structure(T: Transduction, A: Structure, budget: Budget | None = None) -> Structure:
    """Θ(A): the t-tuples satisfying θ in lexicographic order, with relations defined by θ_R."""
    checker = ModelChecker(A, budget)
    universe = sorted(satisfying_tuples(A, T.theta, theta_vars(T.t), budget))
    if not universe:
        raise DomainError("theta defines an empty universe")
    rels = {}
    for name, arity, phi in T.relations:
        groups = relation_vars(arity, T.t)
        tuples = []
        for combo in itertools.product(range(len(universe)), repeat=arity):
            env = {v: universe[b][j] for group, b in zip(groups, combo) for j, v in enumerate(group)}
            env = {v: env[v] for v in free_vars(phi)}
            if checker.holds(phi, env):
                tuples.append(combo)
        rels[name] = tuples
    logger.debug("transduction yields %d elements", len(universe))
    return Structure.build(T.target, len(universe), rels)


def _split(v: str, t: int) -> tuple[str, ...]:
    return tuple(f"{v}_{j}" for j in range(1, t + 1))


def apply_transduction_formula(T: Transduction, phi: Formula) -> Formula:
    """Θ(φ): a formula over the host signature such that (Θ(A), b̄) ⊨ φ iff (A, concatenated b̄) ⊨ Θ(φ).

    Variable v of φ becomes v_1..v_t. Modulo quantifiers have no translation.
    """
    supply = VarSupply(all_vars(phi) | all_vars(T.theta) | {v for _, _, f in T.relations for v in all_vars(f)})

    def guard(v: str) -> Formula:
        return substitute(T.theta, dict(zip(theta_vars(T.t), _split(v, T.t))), supply)

    def go(node: Formula) -> Formula:
        match node:
            case Top() | Bottom():
                return node
            case Atom(rel, args):
                arity, theta_r = T.relation(rel)
                if arity != len(args):
                    raise DomainError(f"relation {rel} has arity {arity}")
                mapping = {
                    v: w
                    for group, a in zip(relation_vars(arity, T.t), args)
                    for v, w in zip(group, _split(a, T.t))
                }
                return conj([guard(a) for a in args] + [substitute(theta_r, mapping, supply)])
            case Eq(a, b):
                return conj([guard(a)] + [Eq(u, w) for u, w in zip(_split(a, T.t), _split(b, T.t))])
            case Not(body):
                return Not(go(body))
            case And(parts):
                return And(tuple(go(p) for p in parts))
            case Or(parts):
                return Or(tuple(go(p) for p in parts))
            case Implies(left, right):
                return Implies(go(left), go(right))
            case Iff(left, right):
                return Iff(go(left), go(right))
            case Exists(v, body):
                return exists_many(_split(v, T.t), conj([guard(v), go(body)]))
            case Forall(v, body):
                return Not(exists_many(_split(v, T.t), conj([guard(v), Not(go(body))])))
            case ModExists():
                raise UnsupportedError("transductions do not translate modulo quantifiers")
        raise TypeError(f"not a formula node: {node!r}")

    return go(phi)


def product_transduction(sig: Signature, s: int) -> Transduction:
    """The s-transduction from σ_s to σ taking A_1 ⊕ ... ⊕ A_s to A_1 ⊗ ... ⊗ A_s."""
    if s < 1:
        raise DomainError("s must be positive")
    theta = conj([Atom(partition_name(i), (f"x{i}",)) for i in range(1, s + 1)])
    relations = []
    for name, arity in sig.relations:
        groups = relation_vars(arity, s)
        theta_r = conj([Atom(name, tuple(group[i] for group in groups)) for i in range(s)])
        relations.append((name, arity, theta_r))
    return Transduction(s, theta, tuple(relations))


def decompose_product(
    phi: Formula,
    s: int,
    nu: DegreeBound | ExplicitTable,
    witness_cap: int,
    sig: Signature,
    *,
    budget: Budget | None = None,
    progress: bool = False,
) -> tuple[ReductionSequence, HnfCertificate]:
    """A decomposition D with A_1 ⊗ ... ⊗ A_s ⊨ φ iff (A_1, ..., A_s) ⊨ D."""
    psi = apply_transduction_formula(product_transduction(sig, s), phi)
    return decompose(psi, s, nu, witness_cap, sig, budget=budget, progress=progress)


_NAME = pp.Word(pp.alphas, pp.alphanums + "_")
_INT = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
_SEMI = pp.Suppress(";")
_REL = pp.Group(
    pp.Suppress(pp.Keyword("relation")) + _NAME + pp.Suppress("/") + _INT + pp.Suppress("=") + FORMULA + _SEMI
)
TRANSDUCTION = (
    pp.Suppress(pp.Keyword("transduction") + "{")
    + pp.Suppress(pp.Keyword("t") + "=")
    + _INT("t")
    + _SEMI
    + pp.Suppress(pp.Keyword("theta") + "=")
    + FORMULA("theta")
    + _SEMI
    + pp.Group(pp.ZeroOrMore(_REL))("relations")
    + pp.Suppress("}")
    + pp.StringEnd()
)
TRANSDUCTION.ignore(pp.python_style_comment)


def parse_transduction(text: str, host: Signature | None = None) -> Transduction:
    """Parse the text form; with ``host`` given, every formula is checked against it."""
    try:
        result = TRANSDUCTION.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise ParseError(f"transduction syntax error: {exc.msg}", exc.lineno, exc.col) from None
    relations = tuple((name, arity, phi) for name, arity, phi in result["relations"])
    if host is not None:
        for phi in [result["theta"]] + [phi for _, _, phi in relations]:
            check_signature(phi, host, text)
    return Transduction(result["t"], result["theta"], relations)
