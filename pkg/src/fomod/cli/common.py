"""Shared pieces of the ``fomod`` command line: the app, option types, input and output helpers."""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated

import typer
from pydantic import BaseModel
from rich.console import Console
from rich.logging import RichHandler

from fomod.budget import Budget
from fomod.config import DEFAULT_BUDGET, Emit
from fomod.encodings.fixtures import c1_class, c2_class, coloured_ordered_forests, ordered_forests
from fomod.errors import DomainError
from fomod.logic.parser import parse_formula
from fomod.logic.syntax import Formula
from fomod.model.enumerate import StructureClass, all_structures, degree_bounded, nu_bounded
from fomod.model.io import parse_structures
from fomod.model.nu import DegreeBound, ExplicitTable
from fomod.model.signature import Signature
from fomod.model.structure import Structure
from fomod.paths import read_text_argument

app = typer.Typer(
    help="Model-theoretic toolkit for first-order logic with modulo-counting quantifiers.",
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

stderr = Console(stderr=True)

SigOpt = Annotated[str, typer.Option("--sig", help="Signature as NAME/ARITY pairs, e.g. 'E/2,G/1'.")]
NuOpt = Annotated[str, typer.Option("--nu", help="Ball-size bound: 'd:<degree>' or 'table:v0,v1,...'.")]
EmitOpt = Annotated[Emit, typer.Option("--emit", help="Output format.")]
FormulaOpt = Annotated[str, typer.Option("--formula", help="Formula text, or @path to read it from a file.")]
StructureOpt = Annotated[str, typer.Option("--structure", help="Structure file, '-' for stdin.")]
ClassOpt = Annotated[
    str,
    typer.Option(
        "--class",
        help="Structure class: all, nu, deg:<d>, c1, c2, ordered-forests or coloured-ordered-forests.",
    ),
]
CapOpt = Annotated[int, typer.Option("--cap", help="Largest structure size to enumerate.")]
UpToIsoOpt = Annotated[bool, typer.Option("--up-to-iso", help="Enumerate one structure per isomorphism type.")]


@dataclass
class Settings:
    """Options given before the command name; ``budget=None`` is unbounded."""

    budget: int | None = DEFAULT_BUDGET
    progress: bool = False


settings = Settings()


def configure_logging(verbose: bool) -> None:
    """One RichHandler on the ``fomod`` logger, writing to stderr."""
    logger = logging.getLogger("fomod")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    logger.addHandler(RichHandler(console=stderr, show_path=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


@app.callback()
def configure(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log debug detail to stderr.")] = False,
    budget: Annotated[
        int, typer.Option("--budget", help="Step budget of exhaustive searches; 0 for no limit.")
    ] = DEFAULT_BUDGET,
    progress: Annotated[bool, typer.Option("--progress", help="Show progress bars on stderr.")] = False,
):
    configure_logging(verbose)
    if budget < 0:
        raise typer.BadParameter("budget must be non-negative", param_hint="--budget")
    settings.budget = budget or None
    settings.progress = progress


def new_budget() -> Budget:
    return Budget(settings.budget)


def read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).expanduser().read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def load_structures(path: str) -> list[tuple[str, Structure]]:
    items = parse_structures(read_input(path))
    if not items:
        raise DomainError(f"no structure in {path}")
    return items


def load_structure(path: str) -> Structure:
    return load_structures(path)[0][1]


def load_formula(text: str, sig: Signature) -> Formula:
    return parse_formula(read_text_argument(text).strip(), sig)


def resolve_class(name: str, nu: DegreeBound | ExplicitTable | None = None) -> StructureClass:
    """The structure class named on the command line."""
    match name:
        case "all":
            return all_structures()
        case "nu":
            if nu is None:
                raise DomainError("class 'nu' needs --nu")
            return nu_bounded(nu)
        case "c1":
            return c1_class()
        case "c2":
            return c2_class()
        case "ordered-forests":
            return ordered_forests()
        case "coloured-ordered-forests":
            return coloured_ordered_forests()
    if name.startswith("deg:"):
        try:
            return degree_bounded(int(name[4:]))
        except ValueError:
            pass
    raise DomainError(f"unknown structure class {name!r}")


def parse_assignment(text: str | None) -> dict[str, int]:
    """``x=0,y=2`` as a variable assignment."""
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        var, sep, value = item.partition("=")
        if not sep or not value.strip().isdigit():
            raise DomainError(f"bad assignment {item!r}, expected VAR=ELEMENT")
        out[var.strip()] = int(value)
    return out


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def emit(fmt: Emit, text: str, payload: BaseModel) -> None:
    """Payload output on stdout, as text or as the JSON model."""
    if fmt == Emit.JSON:
        typer.echo(payload.model_dump_json(indent=2))
    else:
        typer.echo(text.rstrip("\n"))
