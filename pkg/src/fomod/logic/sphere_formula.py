"""sph_τ(x̄): the FO formula defining the realizations of a sphere."""
from __future__ import annotations

import itertools
from collections.abc import Sequence

import networkx as nx

from fomod.errors import DomainError
from fomod.logic.syntax import (
    Atom,
    Eq,
    Forall,
    Formula,
    Implies,
    Not,
    VarSupply,
    conj,
    disj,
    exists_many,
)
from fomod.model.signature import Signature
from fomod.model.spheres import Sphere


def adjacency(sig: Signature, a: str, z: str, supply: VarSupply) -> Formula:
    """a and z are joined by a Gaifman edge: they share a tuple of some relation."""
    cases = []
    for rel, arity in sig.relations:
        for p, q in itertools.permutations(range(arity), 2):
            others = [supply.fresh("w") for _ in range(arity - 2)]
            filler = iter(others)
            args = tuple(a if i == p else z if i == q else next(filler) for i in range(arity))
            cases.append(exists_many(others, Atom(rel, args)))
    return disj(cases)


def sphere_formula(
    t: Sphere,
    centre_vars: Sequence[str] | None = None,
    supply: VarSupply | None = None,
) -> Formula:
    """Formula with one free variable per centre satisfied exactly by the realizations of ``t``.

    One existential variable per non-centre element, pairwise distinctness,
    the complete atomic diagram, and a closure clause for every element
    closer than the radius to the centres: each of its Gaifman neighbours
    is one of the named elements.
    """
    S = t.structure
    if centre_vars is None:
        centre_vars = tuple(f"x{i}" for i in range(1, len(t.centres) + 1))
    centre_vars = tuple(centre_vars)
    if len(centre_vars) != len(t.centres):
        raise DomainError("need exactly one variable per centre")
    if supply is None:
        supply = VarSupply(centre_vars, prefix="u")
    else:
        supply.reserve(centre_vars)

    var: dict[int, str] = {}
    parts: list[Formula] = []
    for x, c in zip(centre_vars, t.centres):
        if c in var:
            parts.append(Eq(x, var[c]))
        else:
            var[c] = x
    dist = nx.multi_source_dijkstra_path_length(S.gaifman, set(t.centres))
    bound = []
    for e in sorted(S.universe, key=lambda e: (dist[e], e)):
        if e not in var:
            var[e] = supply.fresh("u")
            bound.append(var[e])

    parts.extend(Not(Eq(var[e], var[f])) for e, f in itertools.combinations(S.universe, 2))
    for (rel, arity), tuples in zip(S.signature.relations, S.relations):
        for tup in itertools.product(S.universe, repeat=arity):
            atom = Atom(rel, tuple(var[e] for e in tup))
            parts.append(atom if tup in tuples else Not(atom))
    for e in S.universe:
        if dist[e] < t.radius:
            z = supply.fresh("z")
            inside = disj(Eq(z, var[f]) for f in S.universe)
            parts.append(Forall(z, Implies(adjacency(S.signature, var[e], z, supply), inside)))
    return exists_many(bound, conj(parts))
