from enum import IntEnum, StrEnum


class ExitCode(IntEnum):
    """Process exit codes of the ``fomod`` command."""
    OK = 0
    FALSE = 1
    USAGE = 2
    RESOURCE = 3


class Emit(StrEnum):
    """Output formats shared by every command."""
    TEXT = "text"
    JSON = "json"


class BoundSource(StrEnum):
    """Where the minimal-model size bound N of a rewrite comes from."""
    VALUE = "value"
    EMPIRICAL = "empirical"
    SYMBOLIC = "symbolic"


DEFAULT_SIGNATURE: str = "E/2"
DEFAULT_NU: str = "d:2"
# Steps of exhaustive search allowed per CLI invocation unless --budget says otherwise.
DEFAULT_BUDGET: int = 50_000_000
# Name prefix of the unary partition predicates P_1..P_s of a disjoint sum.
PARTITION_PREFIX: str = "P_"
GREEN: str = "G"
