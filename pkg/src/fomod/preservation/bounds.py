"""Size bounds on the minimal models of preserved sentences.

Both bounds come from a scattered-set argument with Nurmonen's radius
r = 3^q and threshold t = q·(ν(r)+1)+1:

* extensions: (2·S·t·m - 1)·ν(2R) with R = 2·s·r, where s counts the
  1-centre r-spheres and S the 1-centre R-spheres of the class;
* homomorphisms: s·ν(4r), where s counts the 1-centre 2r-spheres.

Sphere counts may be supplied; otherwise they are enumerated, which is
only feasible for tiny ν and q.
"""
from __future__ import annotations

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from fomod.budget import Budget
from fomod.errors import DomainError
from fomod.hanf.enumerate import count_spheres
from fomod.model.nu import NuFunction
from fomod.model.signature import Signature

logger = logging.getLogger(__name__)


class BoundParams(BaseModel):
    """Inputs of the minimal-model bounds.

    ``s`` and ``S`` are exact sphere counts. For the extension bound ``s``
    counts r-spheres and ``S`` counts R-spheres; the homomorphism bound reads
    ``s`` as the number of 2r-spheres.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=1, ge=1)
    q: int = Field(ge=0)
    nu: NuFunction
    s: Optional[int] = Field(default=None, ge=1)
    S: Optional[int] = Field(default=None, ge=1)

    @property
    def r(self) -> int:
        return 3**self.q

    @property
    def t(self) -> int:
        return self.q * (self.nu.value(self.r) + 1) + 1

    def big_radius(self, s: int) -> int:
        return 2 * s * self.r


def _need(value: Optional[int], what: str, count, sig: Signature | None) -> int:
    if value is not None:
        return value
    if sig is None:
        raise DomainError(f"{what} was not supplied and no signature is given to enumerate it")
    value = count()
    logger.info("%s = %d by enumeration", what, value)
    return value


def bound_extensions(p: BoundParams, sig: Signature | None = None, budget: Budget | None = None) -> int:
    """N = (2·S·t·m - 1)·ν(2R)."""
    s = _need(p.s, "s", lambda: count_spheres(sig, p.nu, p.r, 1, budget), sig)
    R = p.big_radius(s)
    S = _need(p.S, "S", lambda: count_spheres(sig, p.nu, R, 1, budget), sig)
    return (2 * S * p.t * p.m - 1) * p.nu.value(2 * R)


def bound_homomorphisms(p: BoundParams, sig: Signature | None = None, budget: Budget | None = None) -> int:
    """N = s·ν(4r)."""
    s = _need(p.s, "s", lambda: count_spheres(sig, p.nu, 2 * p.r, 1, budget), sig)
    return s * p.nu.value(4 * p.r)
