"""The tower function Tower(0) = 1, Tower(h) = 2^Tower(h-1)."""
from __future__ import annotations

from functools import cache

from fomod.errors import DomainError, ResourceError

# Tower(5) = 2^65536 is the last value worth materialising.
MAX_TOWER_HEIGHT: int = 5


@cache
def tower(h: int) -> int:
    """A tower of 2s of height ``h``.

    Raises:
        DomainError: If ``h`` is negative.
        ResourceError: If ``h`` exceeds :data:`MAX_TOWER_HEIGHT`.
    """
    if h < 0:
        raise DomainError(f"Tower is defined for h >= 0, got {h}")
    if h > MAX_TOWER_HEIGHT:
        raise ResourceError(f"Tower({h}) has more than 2^65536 binary digits")
    return 1 if h == 0 else 2 ** tower(h - 1)


def bit(i: int, n: int) -> int:
    """The i-th bit of n's binary expansion."""
    return (n >> i) & 1


def set_bits(n: int) -> list[int]:
    """Positions of the 1-bits of ``n`` in ascending order."""
    return [j for j in range(n.bit_length()) if bit(j, n)]
