"""Hanf types and Nurmonen's sufficient condition for (m, q)-equivalence."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

from fomod.model.canonical import Key
from fomod.model.spheres import Sphere, sphere_key, sphere_of
from fomod.model.structure import Structure

logger = logging.getLogger(__name__)


def sphere_census(A: Structure, r: int) -> dict[Key, tuple[int, Sphere]]:
    """For every 1-centre r-sphere realised in ``A``: how often, and one canonical copy."""
    census: dict[Key, tuple[int, Sphere]] = {}
    for a in A.universe:
        key = sphere_key(A, (a,), r)
        if key in census:
            count, t = census[key]
            census[key] = (count + 1, t)
        else:
            census[key] = (1, sphere_of(A, (a,), r).canonical())
    return census


def sphere_counts(A: Structure, r: int) -> dict[Key, int]:
    counts: dict[Key, int] = {}
    for a in A.universe:
        key = sphere_key(A, (a,), r)
        counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass(frozen=True)
class HanfType:
    """Per realised sphere: the count truncated at ``threshold`` and the count mod ``modulus``.

    Spheres that are not realised are omitted, which is the entry (0, 0).
    """

    radius: int
    threshold: int
    modulus: int
    entries: tuple[tuple[Key, int, int], ...]

    def entry(self, key: Key) -> tuple[int, int]:
        for k, truncated, residue in self.entries:
            if k == key:
                return truncated, residue
        return 0, 0

    def digest(self) -> str:
        return hashlib.sha256(repr(self.entries).encode()).hexdigest()[:16]


def hanf_type(A: Structure, r: int, t: int, m: int) -> HanfType:
    counts = sphere_counts(A, r)
    entries = tuple(sorted((key, min(c, t), c % m) for key, c in counts.items()))
    return HanfType(r, t, m, entries)


def nurmonen_parameters(A: Structure, B: Structure, q: int) -> tuple[int, int, int]:
    """(r, e, t) with r = 3^q, e = 1 + largest r-ball of A or B, t = q·e + 1."""
    r = 3**q
    e = 1 + max(len(X.neighbourhood([a], r)) for X in (A, B) for a in X.universe)
    return r, e, q * e + 1


def nurmonen_condition(A: Structure, B: Structure, q: int, m: int) -> bool:
    """Sufficient condition for A ≡^q_m B: every r-sphere occurs equally often, or at least t times in both,
    and with congruent counts mod m.

    A False answer is inconclusive.
    """
    r, e, t = nurmonen_parameters(A, B, q)
    ca, cb = sphere_counts(A, r), sphere_counts(B, r)
    for key in ca.keys() | cb.keys():
        x, y = ca.get(key, 0), cb.get(key, 0)
        if (x - y) % m != 0:
            return False
        if x != y and min(x, y) < t:
            return False
    logger.debug("Nurmonen condition holds with r=%d e=%d t=%d", r, e, t)
    return True
