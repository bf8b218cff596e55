"""Model checking FO+MOD formulas on finite structures.

The checker is the textbook recursion with two additions that keep the
generated formula families tractable:

* quantifier nodes are memoised on the values of their free variables;
* before a quantifier loops over the universe it compiles a *pin plan*
  from the body, a cheap description of the only elements that can make
  the body true (for ∃) or false (for ∀). Equalities ``v=w`` and atoms
  whose other arguments are already bound produce pins.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping

from fomod.budget import Budget, ensure_budget
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
    children,
)
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)

_UNSET = object()

# Plan nodes: ("empty",) | ("eq", w) | ("atom", ri, args) | ("union", plans)
Plan = tuple | None


class ModelChecker:
    """Evaluates formulas on one structure; reuse an instance to share its memo table."""

    def __init__(self, A: Structure, budget: Budget | None = None):
        self.A = A
        self.budget = ensure_budget(budget)
        self._rels = {name: tuples for name, tuples in A.items()}
        self._rel_list = {name: sorted(tuples) for name, tuples in A.items()}
        self._universe = range(A.size)
        self._memo: dict[tuple, bool] = {}
        self._fv: dict[int, tuple[str, ...]] = {}
        self._plans: dict[tuple, Plan] = {}
        # keeps every node whose id() is used as a key alive
        self._alive: list[Formula] = []

    def holds(self, phi: Formula, env: Mapping[str, int] | None = None) -> bool:
        env = dict(env or {})
        missing = self.free(phi) - env.keys()
        if missing:
            raise DomainError(f"unassigned free variables: {', '.join(sorted(missing))}")
        for a in env.values():
            self.A.check_element(a)
        return self._eval(phi, env)

    def free(self, phi: Formula) -> frozenset[str]:
        return frozenset(self._free(phi))

    def _free(self, phi: Formula) -> tuple[str, ...]:
        key = id(phi)
        got = self._fv.get(key)
        if got is not None:
            return got
        match phi:
            case Atom(_, args):
                fv = set(args)
            case Eq(a, b):
                fv = {a, b}
            case Exists(v, body) | Forall(v, body) | ModExists(_, v, body):
                fv = set(self._free(body)) - {v}
            case _:
                fv = set()
                for c in children(phi):
                    fv.update(self._free(c))
        result = tuple(sorted(fv))
        self._fv[key] = result
        self._alive.append(phi)
        return result

    def _eval(self, phi: Formula, env: dict[str, int]) -> bool:
        match phi:
            case Top():
                return True
            case Bottom():
                return False
            case Atom(rel, args):
                try:
                    return tuple(env[a] for a in args) in self._rels[rel]
                except KeyError as exc:
                    raise DomainError(f"cannot evaluate {rel}{args}: unknown name {exc}") from None
            case Eq(a, b):
                return env[a] == env[b]
            case Not(body):
                return not self._eval(body, env)
            case And(parts):
                return all(self._eval(p, env) for p in parts)
            case Or(parts):
                return any(self._eval(p, env) for p in parts)
            case Implies(left, right):
                return not self._eval(left, env) or self._eval(right, env)
            case Iff(left, right):
                return self._eval(left, env) == self._eval(right, env)
            case Exists() | Forall() | ModExists():
                key = (id(phi),) + tuple(env[v] for v in self._free(phi))
                got = self._memo.get(key)
                if got is None:
                    got = self._quantifier(phi, env)
                    self._memo[key] = got
                return got
        raise TypeError(f"cannot evaluate {phi!r}")

    def _quantifier(self, phi: Formula, env: dict[str, int]) -> bool:
        match phi:
            case Exists(v, body):
                cands = self._candidates(phi, body, v, True, env)
                return self._scan(v, body, env, cands, stop_on=True)
            case Forall(v, body):
                cands = self._candidates(phi, body, v, False, env)
                return not self._scan(v, body, env, cands, stop_on=False)
            case ModExists(m, v, body):
                cands = self._candidates(phi, body, v, True, env)
                count = 0
                old = env.get(v, _UNSET)
                for b in cands:
                    self.budget.spend()
                    env[v] = b
                    count += self._eval(body, env)
                self._restore(env, v, old)
                return count % m == 0
        raise TypeError(f"not a quantifier: {phi!r}")

    def _scan(self, v: str, body: Formula, env: dict[str, int], cands, stop_on: bool) -> bool:
        """True iff some candidate makes ``body`` evaluate to ``stop_on``."""
        old = env.get(v, _UNSET)
        found = False
        for b in cands:
            self.budget.spend()
            env[v] = b
            if self._eval(body, env) == stop_on:
                found = True
                break
        self._restore(env, v, old)
        return found

    @staticmethod
    def _restore(env: dict[str, int], v: str, old) -> None:
        if old is _UNSET:
            env.pop(v, None)
        else:
            env[v] = old

    def _candidates(self, node: Formula, body: Formula, v: str, positive: bool, env: dict[str, int]):
        key = (id(node), positive)
        if key not in self._plans:
            known = frozenset(self._free(node))
            self._plans[key] = self._plan(body, v, known, positive)
        plan = self._plans[key]
        if plan is None:
            return self._universe
        return sorted(self._run(plan, v, env))

    def _plan(self, phi: Formula, v: str, known: frozenset[str], positive: bool) -> Plan:
        """Plan for a superset of the values of ``v`` making ``phi`` true (``positive``) or false."""
        match phi:
            case Top():
                return None if positive else ("empty",)
            case Bottom():
                return ("empty",) if positive else None
            case Not(body):
                return self._plan(body, v, known, not positive)
            case Eq(a, b) if positive and v in (a, b) and a != b:
                other = b if a == v else a
                return ("eq", other) if other in known else None
            case Atom(_, args) if positive and v in args:
                if all(a == v or a in known for a in args):
                    return ("atom", phi.rel, args)
                return None
            case And(parts) if positive:
                return self._first(parts, v, known, positive)
            case Or(parts) if not positive:
                return self._first(parts, v, known, positive)
            case And(parts) | Or(parts):
                return self._union([self._plan(p, v, known, positive) for p in parts])
            case Implies(left, right) if positive:
                return self._union([self._plan(left, v, known, False), self._plan(right, v, known, True)])
            case Implies(left, right):
                return self._plan(left, v, known, True) or self._plan(right, v, known, False)
            case Exists(u, body) | Forall(u, body) if u != v:
                return self._plan(body, v, known - {u}, positive)
        return None

    def _first(self, parts, v, known, positive) -> Plan:
        for p in parts:
            plan = self._plan(p, v, known, positive)
            if plan is not None:
                return plan
        return None

    @staticmethod
    def _union(plans: list[Plan]) -> Plan:
        if any(p is None for p in plans):
            return None
        return ("union", tuple(plans))

    def _run(self, plan: tuple, v: str, env: dict[str, int]) -> set[int]:
        match plan:
            case ("empty",):
                return set()
            case ("eq", other):
                return {env[other]}
            case ("atom", rel, args):
                out = set()
                for t in self._rel_list[rel]:
                    value = None
                    for a, x in zip(args, t):
                        if a == v:
                            if value is None:
                                value = x
                            elif value != x:
                                break
                        elif env[a] != x:
                            break
                    else:
                        out.add(value)
                return out
            case ("union", plans):
                out = set()
                for p in plans:
                    out |= self._run(p, v, env)
                return out
        raise TypeError(f"bad plan {plan!r}")


def evaluate(
    A: Structure,
    phi: Formula,
    assignment: Mapping[str, int] | None = None,
    budget: Budget | None = None,
) -> bool:
    """A ⊨ φ[assignment]."""
    return ModelChecker(A, budget).holds(phi, assignment)


def satisfying_tuples(A: Structure, phi: Formula, variables: tuple[str, ...], budget: Budget | None = None):
    """All tuples ā over ``variables`` with A ⊨ φ[ā]."""
    checker = ModelChecker(A, budget)
    return frozenset(
        tup
        for tup in itertools.product(A.universe, repeat=len(variables))
        if checker.holds(phi, dict(zip(variables, tup)))
    )
