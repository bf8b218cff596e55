"""Semantic conversion of FO+MOD sentences into Hanf normal form.

Instead of rewriting the formula, the converter evaluates it on every
ν-bounded witness up to a size cap, groups the witnesses by Hanf type and
describes the satisfying groups by counting literals over 1-centre spheres.

Grouping uses the radius 3^q and threshold q·(ν(3^q)+1)+1 of Nurmonen's
condition, so two witnesses in one group must agree on the sentence; a
disagreement raises :class:`ConsistencyError`. The emitted formula may use
a smaller radius when that already separates the witnesses.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from fomod.budget import Budget, ensure_budget
from fomod.errors import ConsistencyError, DomainError
from fomod.hanf.formulas import HanfFormula, HanfNormalForm, HanfRef, is_boolean_combination
from fomod.hanf.types import hanf_type, sphere_census
from fomod.logic.evaluate import ModelChecker
from fomod.logic.measures import is_sentence, moduli_lcm, qr, relations_used
from fomod.logic.syntax import Formula, Not, conj, disj
from fomod.model.canonical import Key
from fomod.model.enumerate import nu_bounded
from fomod.model.io import format_structure
from fomod.model.nu import DegreeBound, ExplicitTable
from fomod.model.signature import Signature
from fomod.model.spheres import Sphere
from fomod.model.structure import Structure
from fomod.reports import BucketRecord, HnfCertificate

logger = logging.getLogger(__name__)

# (polarity, sphere key, c): "ge" is count ≥ c, "lt" is count < c
CountLiteral = tuple[str, Key, int]


@dataclass(frozen=True)
class HnfParameters:
    q: int
    modulus: int
    radius: int
    threshold: int


def hnf_parameters(phi: Formula, nu: DegreeBound | ExplicitTable) -> HnfParameters:
    """q = qr(φ), m = lcm of its moduli, r = 3^q, t = q·(ν(r)+1)+1."""
    q = qr(phi)
    r = 3**q
    return HnfParameters(q, moduli_lcm(phi), r, q * (nu.value(r) + 1) + 1)


def _buckets(witnesses: Sequence[Structure], values: Sequence[bool], r: int, t: int, m: int) -> dict:
    buckets: dict = {}
    for A, value in zip(witnesses, values):
        tp = hanf_type(A, r, t, m)
        buckets.setdefault(tp, []).append((A, value))
    return buckets


def _disagreement(buckets: dict) -> tuple[Structure, Structure] | None:
    for members in buckets.values():
        first, v0 = members[0]
        for A, v in members[1:]:
            if v != v0:
                return first, A
    return None


def _literal_holds(lit: CountLiteral, counts: dict[Key, int]) -> bool:
    polarity, key, c = lit
    n = counts.get(key, 0)
    return n >= c if polarity == "ge" else n < c


def _candidates(counts: dict[Key, int], keys: Sequence[Key], t: int, m: int) -> list[CountLiteral]:
    """Literals true of ``counts`` that together pin its Hanf type."""
    lits: list[CountLiteral] = []
    for key in keys:
        n = counts.get(key, 0)
        if m == 1 and n >= t:
            lits.append(("ge", key, t))
            continue
        if n >= 1:
            lits.append(("ge", key, n))
        lits.append(("lt", key, n + 1))
    return lits


def _greedy_dnf(positives: list[dict], negatives: list[dict], keys: Sequence[Key], t: int, m: int) -> list[list[CountLiteral]]:
    """Cover every positive profile with terms that exclude every negative one."""
    terms: list[list[CountLiteral]] = []
    uncovered = list(positives)
    while uncovered:
        target = uncovered[0]
        cands = _candidates(target, keys, t, m)
        remaining = list(negatives)
        term: list[CountLiteral] = []
        while remaining:
            best = min(
                cands,
                key=lambda lit: (
                    -sum(1 for n in remaining if not _literal_holds(lit, n)),
                    lit[2],
                    lit[0] != "ge",
                    keys.index(lit[1]),
                ),
            )
            excluded = [n for n in remaining if not _literal_holds(best, n)]
            if not excluded:
                raise ConsistencyError("a positive and a negative witness share a Hanf type")
            term.append(best)
            remaining = [n for n in remaining if _literal_holds(best, n)]
        terms.append(term)
        uncovered = [p for p in uncovered if not all(_literal_holds(lit, p) for lit in term)]
    return terms


def _emit(terms: list[list[CountLiteral]], spheres: dict[Key, Sphere]) -> HanfNormalForm:
    atoms: list[HanfFormula] = []
    index: dict[tuple[Key, int], int] = {}

    def ref(key: Key, c: int) -> HanfRef:
        if (key, c) not in index:
            atoms.append(HanfFormula(c, spheres[key]))
            index[(key, c)] = len(atoms)
        return HanfRef(index[(key, c)])

    disjuncts = []
    for term in terms:
        lits = [ref(key, c) if pol == "ge" else Not(ref(key, c)) for pol, key, c in term]
        disjuncts.append(conj(lits))
    return HanfNormalForm(tuple(atoms), disj(disjuncts))


def hnf_convert(
    phi: Formula,
    sig: Signature,
    nu: DegreeBound | ExplicitTable,
    witness_cap: int,
    *,
    up_to_iso: bool = False,
    witnesses: Sequence[Structure] | None = None,
    minimize_radius: bool = True,
    budget: Budget | None = None,
    progress: bool = False,
) -> tuple[HanfNormalForm, HnfCertificate]:
    """Convert a sentence into a Hanf normal form equivalent to it on all ν-bounded witnesses.

    Args:
        phi: The sentence.
        sig: Its signature.
        nu: Ball-size bound of the class.
        witness_cap: Largest witness size.
        up_to_iso: Enumerate one witness per isomorphism type.
        witnesses: Use these structures instead of enumerating.
        minimize_radius: Emit spheres of the smallest radius that separates the witnesses.

    Returns:
        The normal form and a certificate of what was checked.

    Raises:
        ConsistencyError: Two witnesses of the same Hanf type disagree on ``phi``.
    """
    if not is_sentence(phi):
        raise DomainError("Hanf normal forms are built for sentences only")
    unknown = relations_used(phi) - set(sig.names)
    if unknown:
        raise DomainError(f"formula uses relations outside {sig}: {', '.join(sorted(unknown))}")
    if witness_cap < 1:
        raise DomainError("witness cap must be positive")
    budget = ensure_budget(budget)
    params = hnf_parameters(phi, nu)
    t, m = params.threshold, params.modulus
    if witnesses is None:
        witnesses = list(nu_bounded(nu).members(sig, witness_cap, up_to_iso=up_to_iso, budget=budget, progress=progress))
    else:
        witnesses = list(witnesses)
    values = []
    for A in witnesses:
        values.append(ModelChecker(A, budget).holds(phi))
    logger.info("%d witnesses up to size %d, %d satisfy the sentence", len(witnesses), witness_cap, sum(values))

    buckets = _buckets(witnesses, values, params.radius, t, m)
    clash = _disagreement(buckets)
    if clash is not None:
        raise ConsistencyError(f"witnesses with equal Hanf type disagree on {phi}", clash)

    r_used = params.radius
    if minimize_radius:
        for r in range(params.radius):
            if _disagreement(_buckets(witnesses, values, r, t, m)) is None:
                r_used = r
                break
    logger.info("using radius %d (Nurmonen radius %d), threshold %d, modulus %d", r_used, params.radius, t, m)

    spheres: dict[Key, Sphere] = {}
    profiles = []
    for A in witnesses:
        counts = {}
        for key, (c, sphere) in sphere_census(A, r_used).items():
            spheres.setdefault(key, sphere)
            counts[key] = c
        profiles.append(counts)
    keys = sorted(spheres)
    positives = _unique([p for p, v in zip(profiles, values) if v])
    negatives = _unique([p for p, v in zip(profiles, values) if not v])
    hnf = _emit(_greedy_dnf(positives, negatives, keys, t, m), spheres)
    logger.info("normal form with %d Hanf formulas", len(hnf.atoms))

    cert = HnfCertificate(
        formula=str(phi),
        signature=str(sig),
        nu=str(nu),
        witness_cap=witness_cap,
        up_to_iso=up_to_iso,
        witnesses=len(witnesses),
        quantifier_rank=params.q,
        modulus=m,
        radius=params.radius,
        radius_used=r_used,
        threshold=t,
        buckets=[
            BucketRecord(
                digest=tp.digest(),
                members=len(members),
                value=members[0][1],
                representative=format_structure(members[0][0]),
            )
            for tp, members in sorted(buckets.items(), key=lambda item: item[0].entries)
        ],
    )
    return hnf, cert


def _unique(profiles: list[dict]) -> list[dict]:
    seen = set()
    out = []
    for p in profiles:
        frozen = tuple(sorted(p.items()))
        if frozen not in seen:
            seen.add(frozen)
            out.append(p)
    return out


def is_hanf_normal_form(x) -> bool:
    """Syntactic check: a Boolean combination of 1-centre Hanf formulas."""
    if not isinstance(x, HanfNormalForm):
        return False
    return is_boolean_combination(x.skeleton) and all(
        isinstance(a, HanfFormula) and len(a.sphere.centres) == 1 for a in x.atoms
    )
