"""Entry point of the ``fomod`` command.

Commands return an :class:`~fomod.config.ExitCode`; :func:`run` maps the
error hierarchy onto the remaining codes.
"""
from collections.abc import Sequence

import click
from rich.markup import escape

from fomod.cli import core, encodings, fv, preservation  # noqa: F401  registers the commands
from fomod.cli.common import app, stderr
from fomod.config import ExitCode
from fomod.errors import ConsistencyError, DomainError, ResourceError, UnsupportedError
from fomod.model.io import format_structures


def _error(kind: str, exc: Exception) -> None:
    stderr.print(f"[bold red]{kind}:[/bold red] {escape(str(exc))}")


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code instead of exiting."""
    try:
        result = app(args=list(argv) if argv is not None else None, prog_name="fomod", standalone_mode=False)
    except ConsistencyError as exc:
        _error("inconsistent", exc)
        if exc.pair is not None:
            pair = [("A", exc.pair[0]), ("B", exc.pair[1])]
            click.echo(format_structures(pair, "equal Hanf type, different truth value").rstrip("\n"))
        return ExitCode.FALSE
    except ResourceError as exc:
        _error("out of budget", exc)
        return ExitCode.RESOURCE
    except (DomainError, UnsupportedError) as exc:
        _error("error", exc)
        return ExitCode.USAGE
    except click.exceptions.Abort:
        return ExitCode.USAGE
    except click.ClickException as exc:
        exc.show()
        return ExitCode.USAGE
    if result is None:
        return ExitCode.OK
    return int(result)
