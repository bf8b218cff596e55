"""Relational signatures."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from fomod.config import PARTITION_PREFIX
from fomod.errors import DomainError, ParseError

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    """An ordered list of relation symbols with their arities.

    ``size`` is the sum of arities, which is what bound formulas call |σ|.
    The relation name ``E`` is allowed even though ``E`` is also the
    existential keyword; the parser tells them apart by the following ``(``.
    """

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.relations:
            if not _NAME.match(name):
                raise DomainError(f"invalid relation name {name!r}")
            if name in seen:
                raise DomainError(f"relation {name!r} declared twice")
            if arity < 1:
                raise DomainError(f"relation {name!r} has arity {arity} < 1")
            seen.add(name)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> Signature:
        return cls(tuple((n, int(a)) for n, a in pairs))

    @classmethod
    def parse(cls, text: str) -> Signature:
        """Parse ``"E/2,G/1"`` (commas or whitespace between entries)."""
        pairs = []
        for item in re.split(r"[,\s]+", text.strip()):
            if not item:
                continue
            name, _, arity = item.partition("/")
            if not arity.isdigit():
                raise ParseError(f"bad signature entry {item!r}, expected NAME/INT")
            pairs.append((name, int(arity)))
        return cls(tuple(pairs))

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    @cached_property
    def _arity(self) -> dict[str, int]:
        return dict(self.relations)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.relations)}

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise DomainError(f"unknown relation {name!r}") from None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown relation {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._arity

    def __len__(self) -> int:
        return len(self.relations)

    @property
    def size(self) -> int:
        return sum(a for _, a in self.relations)

    def extend(self, *pairs: tuple[str, int]) -> Signature:
        return Signature(self.relations + tuple(pairs))

    def with_partition(self, s: int) -> Signature:
        """σ_s: this signature plus unary predicates P_1..P_s."""
        return self.extend(*((partition_name(i), 1) for i in range(1, s + 1)))

    def without_partition(self) -> Signature:
        return Signature(tuple((n, a) for n, a in self.relations if not is_partition_name(n)))

    def __str__(self) -> str:
        return ",".join(f"{n}/{a}" for n, a in self.relations)


def partition_name(i: int) -> str:
    return f"{PARTITION_PREFIX}{i}"


def is_partition_name(name: str) -> bool:
    rest = name.removeprefix(PARTITION_PREFIX)
    return rest != name and rest.isdigit()
