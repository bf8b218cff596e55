"""Disjoint decompositions of Hanf formulas and of sentences over σ_s."""
from __future__ import annotations

import itertools
import logging

from fomod.budget import Budget, ensure_budget
from fomod.errors import DomainError
from fomod.fv.reduction import Delta, ReductionSequence
from fomod.hanf.formulas import HanfFormula, HanfRef
from fomod.hanf.hnf import hnf_convert
from fomod.logic.measures import is_sentence, relations_used
from fomod.logic.prop import Prop, substitute_props
from fomod.logic.syntax import FALSE, Formula, conj
from fomod.model.enumerate import nu_bounded
from fomod.model.nu import DegreeBound, ExplicitTable
from fomod.model.signature import Signature, partition_name
from fomod.model.spheres import Sphere
from fomod.model.structure import Structure, disjoint_sum, induced_with_map
from fomod.reports import HnfCertificate

logger = logging.getLogger(__name__)


def unsatisfiable_sequence(s: int, variables: tuple[str, ...] = ()) -> ReductionSequence:
    return ReductionSequence(s, variables, ((),) * s, FALSE)


def sum_parts(T: Structure, s: int) -> dict[int, int] | None:
    """Component (1-based) of every element if ``T`` embeds into an s-disjoint sum, else None.

    Every element must lie in exactly one P_i and no Gaifman edge may join two P_i.
    """
    names = [partition_name(i) for i in range(1, s + 1)]
    missing = [n for n in names if n not in T.signature]
    if missing:
        raise DomainError(f"signature {T.signature} lacks {', '.join(missing)}")
    part: dict[int, int] = {}
    for a in T.universe:
        hosts = [i for i, n in enumerate(names, start=1) if T.holds(n, (a,))]
        if len(hosts) != 1:
            return None
        part[a] = hosts[0]
    if any(part[a] != part[b] for a, b in T.gaifman.edges()):
        return None
    return part


def decompose_hanf(psi: HanfFormula, s: int) -> ReductionSequence:
    """A disjoint decomposition of ``psi`` valid on all sums of s structures.

    Each Δ_i holds at most one Hanf formula over the base signature: the part
    hosting the counted centre counts its own sphere at least k times, every
    other populated part pins its sphere by a Hanf formula with threshold 1.
    """
    if s < 1:
        raise DomainError("s must be positive")
    T, centres, r = psi.sphere.structure, psi.sphere.centres, psi.sphere.radius
    part = sum_parts(T, s)
    if part is None:
        logger.debug("sphere does not embed into a %d-disjoint sum", s)
        return unsatisfiable_sequence(s, psi.free)
    base = T.signature.without_partition()
    deltas: list[tuple[Delta, ...]] = []
    props = []
    for i in range(1, s + 1):
        own = [j for j, c in enumerate(centres) if part[c] == i]
        if not own:
            deltas.append(())
            continue
        group = tuple(centres[j] for j in own)
        sub, new = induced_with_map(T, T.neighbourhood(group, r))
        sub = sub.reduct(base)
        free = tuple(psi.free[j] for j in own if j < len(psi.free))
        mapped = tuple(new[c] for c in group)
        if own[-1] == len(centres) - 1:
            delta = HanfFormula(psi.k, Sphere(sub, mapped, r).canonical(), free, psi.counted)
        else:
            delta = HanfFormula(1, Sphere(sub, mapped + (mapped[0],), r).canonical(), free, psi.counted)
        deltas.append((delta,))
        props.append(Prop(i, 1))
    return ReductionSequence(s, psi.free, tuple(deltas), conj(props))


def sum_witnesses(
    sig: Signature,
    s: int,
    nu: DegreeBound | ExplicitTable,
    cap: int,
    budget: Budget | None = None,
) -> list[Structure]:
    """Disjoint sums of s ν-bounded parts, each part one isomorphism type of size ≤ ``cap``."""
    parts = list(nu_bounded(nu).members(sig, cap, up_to_iso=True, budget=budget))
    return [disjoint_sum(combo)[0] for combo in itertools.product(parts, repeat=s)]


def decompose(
    phi: Formula,
    s: int,
    nu: DegreeBound | ExplicitTable,
    witness_cap: int,
    sig: Signature,
    *,
    budget: Budget | None = None,
    progress: bool = False,
) -> tuple[ReductionSequence, HnfCertificate]:
    """Decompose a sentence over σ_s: Hanf normal form on sums, then each Hanf formula.

    Returns:
        The decomposition, whose Δ_i contain Hanf formulas over ``sig`` only,
        and the certificate of the normal form it was built from.
    """
    if not is_sentence(phi):
        raise DomainError("decomposition is built for sentences only")
    sig_s = sig.with_partition(s)
    unknown = relations_used(phi) - set(sig_s.names)
    if unknown:
        raise DomainError(f"formula uses relations outside {sig_s}: {', '.join(sorted(unknown))}")
    budget = ensure_budget(budget)
    witnesses = sum_witnesses(sig, s, nu, witness_cap, budget)
    logger.info("%d disjoint sums of parts up to size %d", len(witnesses), witness_cap)
    hnf, cert = hnf_convert(phi, sig_s, nu, witness_cap, witnesses=witnesses, budget=budget, progress=progress)

    deltas: list[list[Delta]] = [[] for _ in range(s)]
    betas = {}
    for ell, atom in enumerate(hnf.atoms, start=1):
        part_seq = decompose_hanf(atom, s)
        renumber = {}
        for i, delta_i in enumerate(part_seq.deltas, start=1):
            for j, delta in enumerate(delta_i, start=1):
                if delta not in deltas[i - 1]:
                    deltas[i - 1].append(delta)
                renumber[Prop(i, j)] = Prop(i, deltas[i - 1].index(delta) + 1)
        betas[HanfRef(ell)] = substitute_props(part_seq.beta, renumber)
    beta = substitute_props(hnf.skeleton, betas)
    return ReductionSequence(s, (), tuple(tuple(d) for d in deltas), beta), cert
