"""r-spheres: balls around a tuple of centres, up to centre-preserving isomorphism."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

from fomod.errors import DomainError
from fomod.model.canonical import Key, canonical_form, canonical_key
from fomod.model.signature import Signature
from fomod.model.structure import Structure, induced_with_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sphere:
    """A structure whose universe is exactly the ``radius``-ball around ``centres``."""

    structure: Structure
    centres: tuple[int, ...]
    radius: int

    def __post_init__(self):
        if not self.centres:
            raise DomainError("a sphere needs at least one centre")
        if self.radius < 0:
            raise DomainError("sphere radius must be non-negative")
        ball = self.structure.neighbourhood(self.centres, self.radius)
        if len(ball) != self.structure.size:
            raise DomainError(f"universe is not the {self.radius}-ball around {self.centres}")

    @property
    def signature(self) -> Signature:
        return self.structure.signature

    @property
    def size(self) -> int:
        return self.structure.size

    @cached_property
    def key(self) -> Key:
        return (self.radius, canonical_key(self.structure, self.centres))

    def canonical(self) -> Sphere:
        """The isomorphic copy labelled by its canonical form."""
        form = canonical_form(self.structure, self.centres)
        return Sphere(form.apply(self.structure), tuple(form.labelling[c] for c in self.centres), self.radius)

    def isomorphic(self, other: Sphere) -> bool:
        return self.key == other.key

    def with_centres(self, centres: tuple[int, ...]) -> Sphere:
        """Same structure with another centre tuple; the ball must still cover the universe."""
        return Sphere(self.structure, centres, self.radius)


def sphere_of(A: Structure, centres, r: int) -> Sphere:
    """The r-sphere of ``centres`` in ``A``, re-indexed in numeric order."""
    centres = tuple(centres)
    if not centres:
        raise DomainError("a sphere needs at least one centre")
    sub, new = induced_with_map(A, A.neighbourhood(centres, r))
    return Sphere(sub, tuple(new[c] for c in centres), r)


@lru_cache(maxsize=262144)
def sphere_key(A: Structure, centres: tuple[int, ...], r: int) -> Key:
    """Isomorphism key of the r-sphere around ``centres`` (cached per structure)."""
    return sphere_of(A, centres, r).key


def spheres_isomorphic(t1: Sphere, t2: Sphere) -> bool:
    if t1.signature != t2.signature:
        raise DomainError("spheres over different signatures")
    if t1.radius != t2.radius or len(t1.centres) != len(t2.centres):
        raise DomainError("spheres differ in radius or number of centres")
    return t1.isomorphic(t2)


def realizations(A: Structure, t: Sphere) -> frozenset[tuple[int, ...]]:
    """τ(A): every tuple of ``A`` whose sphere of radius ``t.radius`` is isomorphic to ``t``."""
    if A.signature != t.signature:
        raise DomainError("structure and sphere use different signatures")
    n = len(t.centres)
    return frozenset(
        tup for tup in itertools.product(A.universe, repeat=n) if sphere_key(A, tup, t.radius) == t.key
    )
