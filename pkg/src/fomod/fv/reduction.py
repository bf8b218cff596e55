"""Reduction sequences (Δ_1, ..., Δ_s, β) and their text format.

    decomposition {
      s = 2 ;
      vars = x ;
      delta 1 { X_1_1 : E y. E(y,y) ; }
      delta 2 { }
      beta = X_1_1
    }

Elements of a disjoint sum are addressed as ``(part, element)`` with a
0-based part index, the same convention as :func:`fomod.model.structure.disjoint_union`.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import pyparsing as pp

from fomod.errors import DomainError, ParseError
from fomod.hanf.formulas import HanfFormula
from fomod.logic.evaluate import ModelChecker
from fomod.logic.measures import free_vars, size
from fomod.logic.parser import FORMULA, VAR
from fomod.logic.prop import PROP, Prop, PropFormula, eval_prop, props_used
from fomod.logic.syntax import Formula
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)

Delta = Formula | HanfFormula


def delta_free_vars(delta: Delta) -> frozenset[str]:
    if isinstance(delta, HanfFormula):
        return frozenset(delta.free)
    return free_vars(delta)


def delta_formula(delta: Delta) -> Formula:
    return delta.to_formula() if isinstance(delta, HanfFormula) else delta


def delta_holds(delta: Delta, A: Structure, assignment: Mapping[str, int]) -> bool:
    if isinstance(delta, HanfFormula):
        return delta.holds(A, assignment)
    return ModelChecker(A).holds(delta, {v: assignment[v] for v in free_vars(delta)})


@dataclass(frozen=True)
class ReductionSequence:
    """An s-reduction sequence over ``variables``; X_i_j names ``deltas[i-1][j-1]``."""

    s: int
    variables: tuple[str, ...]
    deltas: tuple[tuple[Delta, ...], ...]
    beta: PropFormula

    def __post_init__(self):
        if self.s < 1:
            raise DomainError("s must be positive")
        if len(self.deltas) != self.s:
            raise DomainError(f"expected {self.s} formula sets, got {len(self.deltas)}")
        declared = set(self.variables)
        for i, delta_i in enumerate(self.deltas, start=1):
            for j, delta in enumerate(delta_i, start=1):
                extra = delta_free_vars(delta) - declared
                if extra:
                    raise DomainError(f"X_{i}_{j} has undeclared free variables {sorted(extra)}")
        for p in props_used(self.beta):
            if not isinstance(p, Prop) or not 1 <= p.component <= self.s or not 1 <= p.index <= len(self.deltas[p.component - 1]):
                raise DomainError(f"proposition {p.name} does not name a formula")

    def size(self) -> int:
        """|β| plus the sizes of all formulas in the Δ_i."""
        return size(self.beta) + sum(size(delta_formula(d)) for delta_i in self.deltas for d in delta_i)

    def propositions(self) -> list[Prop]:
        return [Prop(i, j) for i, delta_i in enumerate(self.deltas, start=1) for j in range(1, len(delta_i) + 1)]


def truth_assignment(
    D: ReductionSequence, parts: Sequence[Structure], abar: Sequence[tuple[int, int]]
) -> dict[Prop, bool]:
    """μ: X_i_j is true iff the free variables of δ are all hosted by part i and A_i satisfies δ there."""
    if len(parts) != D.s:
        raise DomainError(f"expected {D.s} parts, got {len(parts)}")
    if len(abar) != len(D.variables):
        raise DomainError(f"expected {len(D.variables)} elements, got {len(abar)}")
    hosted: list[dict[str, int]] = [{} for _ in parts]
    for var, (part, a) in zip(D.variables, abar):
        if not 0 <= part < D.s:
            raise DomainError(f"part index {part} outside [0,{D.s})")
        parts[part].check_element(a)
        hosted[part][var] = a
    mu = {}
    for i, delta_i in enumerate(D.deltas):
        for j, delta in enumerate(delta_i):
            fv = delta_free_vars(delta)
            mu[Prop(i + 1, j + 1)] = fv <= hosted[i].keys() and delta_holds(delta, parts[i], hosted[i])
    return mu


def eval_reduction(D: ReductionSequence, parts: Sequence[Structure], abar: Sequence[tuple[int, int]] = ()) -> bool:
    """(A_1, ..., A_s, ā) ⊨ D."""
    return eval_prop(D.beta, truth_assignment(D, parts, abar))


def format_reduction(D: ReductionSequence) -> str:
    lines = ["decomposition {", f"  s = {D.s} ;", "  vars = " + " ".join(D.variables) + " ;"]
    for i, delta_i in enumerate(D.deltas, start=1):
        if not delta_i:
            lines.append(f"  delta {i} {{ }}")
            continue
        lines.append(f"  delta {i} {{")
        lines += [f"    X_{i}_{j} : {delta_formula(d)} ;" for j, d in enumerate(delta_i, start=1)]
        lines.append("  }")
    lines.append(f"  beta = {D.beta}")
    lines.append("}")
    return "\n".join(lines) + "\n"


_SEMI = pp.Suppress(pp.Optional(";"))
_LABEL = pp.Regex(r"X_\d+_\d+")
_ENTRY = pp.Group(_LABEL + pp.Suppress(":") + FORMULA + _SEMI)
_DELTA = pp.Group(
    pp.Suppress(pp.Keyword("delta"))
    + pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    + pp.Suppress("{")
    + pp.Group(pp.ZeroOrMore(_ENTRY))
    + pp.Suppress("}")
)
DECOMPOSITION = (
    pp.Suppress(pp.Keyword("decomposition") + "{")
    + pp.Suppress(pp.Keyword("s") + "=")
    + pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))("s")
    + pp.Suppress(";")
    + pp.Suppress(pp.Keyword("vars") + "=")
    + pp.Group(pp.ZeroOrMore(VAR))("vars")
    + pp.Suppress(";")
    + pp.Group(pp.ZeroOrMore(_DELTA))("deltas")
    + pp.Suppress(pp.Keyword("beta") + "=")
    + PROP("beta")
    + _SEMI
    + pp.Suppress("}")
    + pp.StringEnd()
)
DECOMPOSITION.ignore(pp.python_style_comment)


def parse_reduction(text: str) -> ReductionSequence:
    try:
        result = DECOMPOSITION.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise ParseError(f"decomposition syntax error: {exc.msg}", exc.lineno, exc.col) from None
    s = result["s"]
    deltas: list[list[Formula]] = [[] for _ in range(s)]
    seen = set()
    for i, entries in result["deltas"]:
        if not 1 <= i <= s:
            raise ParseError(f"delta {i} outside [1,{s}]")
        if i in seen:
            raise ParseError(f"delta {i} listed twice")
        seen.add(i)
        for j, (label, phi) in enumerate(entries, start=1):
            if Prop.from_name(label) != Prop(i, j):
                raise ParseError(f"expected label X_{i}_{j}, found {label}")
            deltas[i - 1].append(phi)
    return ReductionSequence(s, tuple(result["vars"]), tuple(tuple(d) for d in deltas), result["beta"])
