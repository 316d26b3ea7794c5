"""
Front door of the lab: `run(argv)` dispatches a subcommand, maps its
outcome to an exit code and appends a manifest entry.

    0   success
    1   invalid model, options or domain, or a failed check
    2   numeric non-convergence
    64  usage error
"""

# Python modules
import logging
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

# Third party modules
from rest_framework import serializers

# Django modules
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management import call_command, load_command_class
from django.core.management.base import BaseCommand, CommandError
from django.test.utils import override_settings

# Project modules
from apps.abstracts.exceptions import ConvergenceError, LabError
from apps.cli.models import RunManifest
from apps.cli.serializers import LAB_COMMANDS
from apps.cli.writers import MANIFEST_NAME, append_manifest, digest, read_manifest, to_jsonable


logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_INVALID: int = 1
EXIT_NOT_CONVERGED: int = 2
EXIT_USAGE: int = 64

COMMANDS: tuple[str, ...] = LAB_COMMANDS + ("replay",)
VERSIONED_PACKAGES: tuple[str, ...] = ("numpy", "scipy", "Django", "djangorestframework", "PyYAML")


def usage() -> str:
    return (
        "usage: manage.py {" + ",".join(COMMANDS) + "} [options]\n"
        "Run `manage.py <command> --help` for the options of a command.\n"
    )


def versions() -> dict[str, str]:
    found: dict[str, str] = {"python": platform.python_version()}
    for package in VERSIONED_PACKAGES:
        try:
            found[package] = version(package)
        except PackageNotFoundError:
            found[package] = "unknown"
    return found


def load_lab_command(name: str) -> BaseCommand:
    """`sweep-lambda` -> apps.cli.management.commands.sweep_lambda.Command()."""
    return load_command_class("apps.cli", name.replace("-", "_"))


def _outputs(run_dir: Optional[str]) -> dict[str, str]:
    if not run_dir or not Path(run_dir).is_dir():
        return {}
    return {path.name: digest(path) for path in sorted(Path(run_dir).iterdir()) if path.is_file()}


def _record(command: BaseCommand, argv: list[str], exit_code: int, wall_time: float) -> Optional[dict[str, Any]]:
    record: Optional[dict[str, Any]] = getattr(command, "record", None)
    if record is None:
        return None
    entry: dict[str, Any] = {
        "command": record["command"],
        "argv": argv,
        "exit_code": exit_code,
        "wall_time": wall_time,
        "seed": record["seed"],
        "threads": settings.MFGS_THREADS,
        "out": record["out"],
        "run_dir": record["run_dir"],
        "inputs": record["inputs"],
        "versions": versions(),
        "outputs": _outputs(record["run_dir"]),
    }
    manifest = append_manifest(Path(record["out"]), entry)
    logger.info("Appended %s run (exit %d) to %s", record["command"], exit_code, manifest)
    if settings.MFGS_RECORD_RUNS:
        _store(entry)
    return entry


def _store(entry: dict[str, Any]) -> None:
    RunManifest.objects.create(
        command=entry["command"],
        argv=entry["argv"],
        exit_code=entry["exit_code"],
        wall_time=entry["wall_time"],
        seed="" if entry["seed"] is None else str(entry["seed"]),
        threads=entry["threads"],
        run_dir=entry["run_dir"] or "",
        inputs=to_jsonable(entry["inputs"]),
        versions=entry["versions"],
        outputs=entry["outputs"],
    )


def run(argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run one lab subcommand and return its exit code."""
    argv = [str(arg) for arg in argv]
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    if not argv or argv[0] not in COMMANDS:
        stderr.write(usage())
        return EXIT_USAGE

    name: str = argv[0]
    command = load_lab_command(name)
    start_time: datetime = datetime.now()
    try:
        call_command(command, *argv[1:], stdout=stdout, stderr=stderr)
        exit_code = EXIT_OK
    except CommandError as exc:
        stderr.write(command.create_parser("manage.py", name).format_usage())
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse exits after printing --help
        return int(exc.code or 0)
    except ConvergenceError as exc:
        stderr.write(f"Did not converge: {exc}\n")
        exit_code = EXIT_NOT_CONVERGED
    except (LabError, ValidationError, serializers.ValidationError) as exc:
        detail = exc.detail if isinstance(exc, serializers.ValidationError) else exc
        stderr.write(f"Invalid: {detail}\n")
        exit_code = EXIT_INVALID

    wall_time: float = (datetime.now() - start_time).total_seconds()
    _record(command, argv, exit_code, wall_time)
    return exit_code


# ----------------------------------------------
# Replay
#
@dataclass
class ReplayResult:
    """Outcome of re-running one manifest entry."""

    argv: list[str]
    expected_exit: int
    exit_code: int
    expected: dict[str, str]
    actual: dict[str, str]
    mismatched: list[str] = field(default_factory=list)

    @property
    def reproduced(self) -> bool:
        return self.exit_code == self.expected_exit and not self.mismatched


def replay_manifest(
    path: str | Path,
    entry: int = -1,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> ReplayResult:
    """
    Re-run a manifest entry at its recorded thread count and compare the
    SHA-256 of every output file with the recorded one. Relative paths in
    the recorded argv resolve against the current directory.
    """
    if not Path(path).is_file():
        raise LabError(f"Manifest {path} does not exist")
    entries = read_manifest(Path(path))
    if not entries:
        raise LabError(f"Manifest {path} is empty")
    try:
        recorded = entries[entry]
    except IndexError:
        raise LabError(f"Manifest {path} has no entry {entry}", {"entries": len(entries)})

    with override_settings(MFGS_THREADS=recorded["threads"]):
        exit_code = run(recorded["argv"], stdout=stdout, stderr=stderr)

    rerun = read_manifest(Path(recorded["out"]) / MANIFEST_NAME)[-1]
    expected: dict[str, str] = recorded["outputs"]
    actual: dict[str, str] = rerun["outputs"]
    mismatched = sorted(
        name for name in set(expected) | set(actual) if expected.get(name) != actual.get(name)
    )
    if mismatched:
        logger.warning("Replay of %s differs in %s", recorded["argv"], mismatched)
    return ReplayResult(
        argv=recorded["argv"],
        expected_exit=recorded["exit_code"],
        exit_code=exit_code,
        expected=expected,
        actual=actual,
        mismatched=mismatched,
    )
