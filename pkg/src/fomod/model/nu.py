"""Ball-size bounds ν: ℕ -> ℕ.

A structure is ν-bounded when every r-ball has at most ν(r) elements.
``DegreeBound(d)`` is the bound ν_d implied by Gaifman degree ≤ d;
``ExplicitTable`` lists ν(0), ν(1), ... and grows by one per step past
its last entry unless extension is switched off.
"""
from __future__ import annotations

from typing import Annotated, Literal, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from fomod.errors import ParseError, ResourceError
from fomod.model.structure import Structure


class DegreeBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["degree"] = "degree"
    d: int = Field(ge=0)

    def value(self, r: int) -> int:
        # ν_d(r) = 1 + d·Σ_{i<r} (d-1)^i; 0**0 == 1 keeps d = 1 right
        return 1 + self.d * sum((self.d - 1) ** i for i in range(r))

    @property
    def max_degree(self) -> int:
        return self.d

    def __str__(self) -> str:
        return f"d:{self.d}"


class ExplicitTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["table"] = "table"
    values: tuple[int, ...]
    extend: bool = True

    @field_validator("values")
    @classmethod
    def _strictly_increasing(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("a ν table needs at least one value")
        if v[0] < 1:
            raise ValueError("ν(0) must be at least 1")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("ν table must be strictly increasing")
        return v

    def value(self, r: int) -> int:
        last = len(self.values) - 1
        if r <= last:
            return self.values[r]
        if not self.extend:
            raise ResourceError(f"ν table has no entry for r={r} and extension is disabled")
        return self.values[last] + (r - last)

    @property
    def max_degree(self) -> int:
        return self.value(1) - 1

    def __str__(self) -> str:
        return "table:" + ",".join(str(v) for v in self.values)


NuFunction = Annotated[Union[DegreeBound, ExplicitTable], Field(discriminator="kind")]

NU_ADAPTER: TypeAdapter = TypeAdapter(NuFunction)


def parse_nu(text: str) -> DegreeBound | ExplicitTable:
    """Parse ``d:<int>`` or ``table:v0,v1,...``."""
    kind, _, rest = text.strip().partition(":")
    try:
        match kind:
            case "d":
                return DegreeBound(d=int(rest))
            case "table":
                return ExplicitTable(values=tuple(int(v) for v in rest.split(",") if v.strip()))
    except ValueError as exc:
        raise ParseError(f"bad ν bound {text!r}: {exc}") from None
    raise ParseError(f"bad ν bound {text!r}, expected d:<int> or table:v0,v1,...")


def nu_value(nu: DegreeBound | ExplicitTable, r: int) -> int:
    return nu.value(r)


def check_nu_bounded(A: Structure, nu: DegreeBound | ExplicitTable, r_max: int) -> bool:
    """True iff |N_r(a)| ≤ ν(r) for every element a and every r ≤ r_max."""
    limits = np.array([nu.value(r) for r in range(r_max + 1)])
    for a in A.universe:
        dists = np.fromiter(
            nx.single_source_shortest_path_length(A.gaifman, a, cutoff=r_max).values(), dtype=np.int64
        )
        sizes = np.cumsum(np.bincount(dists, minlength=r_max + 1))
        if np.any(sizes > limits):
            return False
    return True


def is_nu_bounded(A: Structure, nu: DegreeBound | ExplicitTable) -> bool:
    """ν-boundedness for every radius; balls stop growing after radius |A|-1."""
    if isinstance(nu, DegreeBound):
        return A.degree <= nu.d
    return check_nu_bounded(A, nu, A.size - 1)
