"""
fomod - finite-model tools for first-order logic with modulo-counting quantifiers.
"""


def main() -> None:
    """Entry point for the ``fomod`` console script.

    The command modules import every subpackage; importing ``fomod`` alone
    (e.g. for ``fomod.config``) stays cheap.
    """
    from fomod.cli.app import run

    raise SystemExit(run())
