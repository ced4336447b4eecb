"""
Console entry point: ``homothet-packing <subcommand> ...``.

The same subcommands run as ``python manage.py packing <subcommand> ...``.
"""

import os
import sys
from collections.abc import Sequence
from typing import TextIO

import django

PROG_NAME = "homothet-packing"


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """
    Run one subcommand and return its exit code.

    Args:
        argv: Arguments after the program name
        stdout: Stream for JSON payloads; defaults to ``sys.stdout``
        stderr: Stream for diagnostics; defaults to ``sys.stderr``

    Returns:
        0 on success, 1 on a verification or soundness failure, 2 on usage errors
    """
    from homothet_packing.packings.management.commands.packing import Command  # noqa: PLC0415

    command = Command(stdout=stdout, stderr=stderr)
    try:
        command.run_from_argv([PROG_NAME, "packing", *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


def main() -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")
    django.setup()
    sys.exit(run(sys.argv[1:]))
