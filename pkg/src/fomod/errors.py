"""Exception hierarchy shared by every fomod subpackage.

The CLI maps each class onto an exit code (see ``fomod.config.ExitCode``).
"""
from __future__ import annotations


class FomodError(Exception):
    """Base class for all toolkit errors."""

    pass


class DomainError(FomodError):
    """An operation was called outside its domain (bad element, empty tuple, k = 0, ...)."""

    pass


class ParseError(DomainError):
    """Text input does not match one of the grammars."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ResourceError(FomodError):
    """A step budget was exhausted or a bound could not be instantiated."""

    pass


class UnsupportedError(FomodError):
    """The construction is not defined for the given input (e.g. MOD quantifiers in a transduction)."""

    pass


class ConsistencyError(FomodError):
    """Two structures with the same Hanf type disagree on a sentence.

    This can only be caused by a bug: the bucket thresholds are chosen so
    that equal types force equal truth values.
    """

    def __init__(self, message: str, pair: tuple | None = None):
        self.pair = pair
        super().__init__(message)
