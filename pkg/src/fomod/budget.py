"""Step counting for exhaustive searches."""
from __future__ import annotations

import logging

from fomod.errors import ResourceError

logger = logging.getLogger(__name__)


class Budget:
    """A mutable step counter that raises :class:`ResourceError` once ``limit`` is crossed.

    ``limit=None`` means unbounded; the counter still runs so callers can
    report how much work a search did.
    """

    def __init__(self, limit: int | None = None):
        if limit is not None and limit < 0:
            raise ValueError("budget limit must be non-negative")
        self.limit = limit
        self.used = 0

    def spend(self, steps: int = 1) -> None:
        self.used += steps
        if self.limit is not None and self.used > self.limit:
            logger.debug("budget of %d steps exhausted", self.limit)
            raise ResourceError(f"step budget of {self.limit} exhausted")

    @property
    def remaining(self) -> int | None:
        if self.limit is None:
            return None
        return max(self.limit - self.used, 0)

    def __repr__(self) -> str:
        return f"Budget(limit={self.limit}, used={self.used})"


def ensure_budget(budget: Budget | None) -> Budget:
    """Return ``budget`` or a fresh unbounded one."""
    return budget if budget is not None else Budget()
