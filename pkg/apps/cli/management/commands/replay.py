# Python modules
from datetime import datetime
from typing import Any

# Django modules
from django.core.management.base import BaseCommand, CommandParser

# Project modules
from apps.abstracts.exceptions import CheckFailure
from apps.cli.runner import replay_manifest


class Command(BaseCommand):
    help = "Re-run a manifest entry and compare every output file with the recorded digest"

    requires_system_checks = []

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("manifest", metavar="MANIFEST", help="Path to a manifest.jsonl file.")
        parser.add_argument("--entry", type=int, default=-1, help="Entry index (default: last).")

    def handle(self, *args: Any, **options: Any) -> None:
        start_time: datetime = datetime.now()
        result = replay_manifest(
            options["manifest"], options["entry"], stdout=self.stdout, stderr=self.stderr
        )
        if result.exit_code != result.expected_exit:
            raise CheckFailure([f"exit code {result.exit_code} != {result.expected_exit}"])
        if result.mismatched:
            raise CheckFailure(result.mismatched)

        self.stdout.write(
            self.style.SUCCESS(
                f"Reproduced {len(result.expected)} output(s) bit-exactly in "
                f"{(datetime.now() - start_time).total_seconds()} seconds."
            )
        )
