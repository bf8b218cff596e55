"""Brute-force checks for preservation under extensions and homomorphisms: minimal models,
preservation counterexamples, the choice of the size bound N, and a
refuter for short existential equivalents.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass

from fomod.budget import Budget, ensure_budget
from fomod.config import BoundSource
from fomod.errors import DomainError
from fomod.logic.evaluate import ModelChecker
from fomod.logic.measures import is_sentence, moduli_lcm, qr
from fomod.logic.syntax import Formula
from fomod.model.canonical import canonical_key
from fomod.model.enumerate import StructureClass
from fomod.model.homomorphism import find_homomorphism
from fomod.model.nu import DegreeBound, ExplicitTable
from fomod.model.signature import Signature
from fomod.model.structure import Structure, induced_with_map
from fomod.preservation.bounds import BoundParams, bound_extensions, bound_homomorphisms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """``smaller`` satisfies the sentence, ``larger`` does not, and ``mapping`` sends one into the other."""

    smaller: Structure
    larger: Structure
    mapping: dict[int, int]


def _proper_subsets(A: Structure) -> Iterator[tuple[int, ...]]:
    for k in range(A.size - 1, 0, -1):
        yield from itertools.combinations(A.universe, k)


def _sentence(phi: Formula) -> None:
    if not is_sentence(phi):
        raise DomainError("expected a sentence")


def find_minimal_models(
    phi: Formula,
    cap: int,
    cls: StructureClass,
    sig: Signature,
    budget: Budget | None = None,
    progress: bool = False,
) -> list[Structure]:
    """Class-minimal models of size ≤ ``cap``, one per isomorphism type, smallest first."""
    _sentence(phi)
    budget = ensure_budget(budget)
    found = []
    for A in cls.members(sig, cap, up_to_iso=True, budget=budget, progress=progress):
        if not ModelChecker(A, budget).holds(phi):
            continue
        minimal = True
        for keep in _proper_subsets(A):
            budget.spend()
            B = induced_with_map(A, keep)[0]
            if cls(B) and ModelChecker(B, budget).holds(phi):
                minimal = False
                break
        if minimal:
            found.append(A)
    found.sort(key=lambda A: (A.size, canonical_key(A)))
    logger.info("%d minimal models up to size %d", len(found), cap)
    return found


def check_preserved_extensions(
    phi: Formula,
    cls: StructureClass,
    cap: int,
    sig: Signature,
    budget: Budget | None = None,
    progress: bool = False,
) -> Violation | None:
    """A model inside the class that has a non-model induced extension in the class, or None."""
    _sentence(phi)
    budget = ensure_budget(budget)
    for B in cls.members(sig, cap, up_to_iso=True, budget=budget, progress=progress):
        if ModelChecker(B, budget).holds(phi):
            continue
        for keep in _proper_subsets(B):
            budget.spend()
            A, new = induced_with_map(B, keep)
            if cls(A) and ModelChecker(A, budget).holds(phi):
                return Violation(A, B, {i: old for old, i in new.items()})
    return None


def check_preserved_homomorphisms(
    phi: Formula,
    cls: StructureClass,
    cap: int,
    sig: Signature,
    budget: Budget | None = None,
    progress: bool = False,
) -> Violation | None:
    """A model with a homomorphism into a non-model, both in the class, or None."""
    _sentence(phi)
    budget = ensure_budget(budget)
    models, others = [], []
    for A in cls.members(sig, cap, up_to_iso=True, budget=budget, progress=progress):
        (models if ModelChecker(A, budget).holds(phi) else others).append(A)
    for A in models:
        for B in others:
            h = find_homomorphism(A, B, budget)
            if h is not None:
                return Violation(A, B, h)
    return None


def resolve_bound(
    phi: Formula,
    source: BoundSource,
    *,
    preserved_under: str = "extensions",
    value: int | None = None,
    cls: StructureClass | None = None,
    cap: int | None = None,
    sig: Signature | None = None,
    nu: DegreeBound | ExplicitTable | None = None,
    s: int | None = None,
    S: int | None = None,
    budget: Budget | None = None,
) -> int:
    """The bound N for a rewrite.

    ``value`` is taken as is; ``empirical`` is the largest minimal model up to
    ``cap`` (1 if there is none); ``symbolic`` instantiates the minimal-model
    bound for ``preserved_under`` ("extensions" or "homomorphisms").
    """
    match source:
        case BoundSource.VALUE:
            if value is None or value < 1:
                raise DomainError("a positive bound value is required")
            return value
        case BoundSource.EMPIRICAL:
            if cls is None or cap is None or sig is None:
                raise DomainError("the empirical bound needs a class, a cap and a signature")
            minimal = find_minimal_models(phi, cap, cls, sig, budget)
            return max((A.size for A in minimal), default=1)
        case BoundSource.SYMBOLIC:
            if nu is None:
                raise DomainError("the symbolic bound needs ν")
            params = BoundParams(m=moduli_lcm(phi), q=qr(phi), nu=nu, s=s, S=S)
            if preserved_under == "homomorphisms":
                return bound_homomorphisms(params, sig, budget)
            return bound_extensions(params, sig, budget)
    raise DomainError(f"unknown bound source {source!r}")


@dataclass(frozen=True)
class Refutation:
    """Outcome of :func:`refute_small_existential`.

    ``witness`` is a model all of whose k-variable atomic types also occur in
    some non-model; it exists iff no existential sentence with k variables is
    equivalent on the checked members.
    """

    refuted: bool
    witness: Structure | None
    types: int
    structures: int


def _realised_types(A: Structure, k: int) -> set[tuple]:
    """Complete atomic types of injective tuples of length ≤ k, as labelled structures."""
    out = set()
    for n in range(1, min(k, A.size) + 1):
        for tup in itertools.permutations(A.universe, n):
            pos = {a: i for i, a in enumerate(tup)}
            rels = tuple(
                frozenset(tuple(pos[x] for x in t) for t in tuples if all(x in pos for x in t))
                for tuples in A.relations
            )
            out.add((n, rels))
    return out


def refute_small_existential(
    phi: Formula,
    k: int,
    cls: StructureClass,
    cap: int,
    sig: Signature,
    budget: Budget | None = None,
) -> Refutation:
    """Decide whether some existential sentence with at most ``k`` variables agrees with φ
    on the class members up to ``cap``.

    Such a sentence is equivalent to a disjunction of ∃ȳ τ(ȳ) over complete
    atomic types τ of distinct variables; the largest admissible disjunction
    uses every type no non-model realises, so it suffices to test that one.
    """
    _sentence(phi)
    if k < 1:
        raise DomainError("k must be positive")
    budget = ensure_budget(budget)
    models, others = [], []
    for A in cls.members(sig, cap, up_to_iso=True, budget=budget):
        budget.spend()
        (models if ModelChecker(A, budget).holds(phi) else others).append((A, _realised_types(A, k)))
    forbidden = set().union(*(types for _, types in others))
    allowed = set().union(*(types for _, types in models)) - forbidden
    for A, types in models:
        if not types & allowed:
            logger.info("model of size %d realises only types of non-models", A.size)
            return Refutation(True, A, len(allowed | forbidden), len(models) + len(others))
    return Refutation(False, None, len(allowed | forbidden), len(models) + len(others))
