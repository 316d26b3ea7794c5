# Django modules
from django.db.models import (
    CharField,
    FloatField,
    IntegerField,
    JSONField,
)

# Project modules
from apps.abstracts.models import AbstractBaseModel


class RunManifest(AbstractBaseModel):
    """
    RunManifest database (table) model.

    Mirrors one line of `<out>/manifest.jsonl`.
    """
    MAX_COMMAND_LENGTH = 32
    MAX_RUN_DIR_LENGTH = 255
    MAX_SEED_LENGTH = 20

    command = CharField(max_length=MAX_COMMAND_LENGTH, verbose_name="Command")
    argv = JSONField(default=list, verbose_name="Arguments")
    exit_code = IntegerField(verbose_name="Exit code")
    wall_time = FloatField(verbose_name="Wall time, s")
    # Decimal digits; seeds go up to 2^64 - 1, past SQLite integers.
    seed = CharField(max_length=MAX_SEED_LENGTH, blank=True, verbose_name="Seed")
    threads = IntegerField(verbose_name="Threads")
    run_dir = CharField(max_length=MAX_RUN_DIR_LENGTH, blank=True, verbose_name="Run directory")
    inputs = JSONField(default=dict, verbose_name="Inputs")
    versions = JSONField(default=dict, verbose_name="Versions")
    outputs = JSONField(default=dict, verbose_name="Outputs")

    class Meta:
        ordering = ("-created_at",)
        verbose_name = "Run manifest"
        verbose_name_plural = "Run manifests"

    def __str__(self) -> str:
        """Returns the string representation of the object."""
        return f"{self.command} -> {self.exit_code}"

    @property
    def succeeded(self) -> bool:
        return self.exit_code == 0
