# Python modules
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable, Sequence

# Third party modules
from rest_framework import serializers

# Django modules
from django.conf import settings
from django.core.management.base import BaseCommand, CommandParser

# Project modules
from apps.cli.serializers import CHAINS, FORMATS, RunConfigSerializer
from apps.cli.writers import write_json, write_table
from apps.hj_halfspin.profile import SELECTIONS
from apps.mc_sim.sampler import DYNAMICS
from apps.modelspec.loaders import load_model
from apps.modelspec.spec import ModelSpec


logger = logging.getLogger(__name__)

# dest, argparse keywords
FLAGS: dict[str, tuple[str, dict[str, Any]]] = {
    "model": ("model", {"metavar": "PATH", "help": "Model file (TOML or YAML)."}),
    "N": ("N", {"metavar": "INT[,INT...]", "help": "Number of spins, or a comma separated list."}),
    "T": ("T", {"type": float, "help": "Time horizon."}),
    "dt": ("dt", {"type": float, "help": "Lax-Oleinik time step."}),
    "mesh": ("mesh", {"type": int, "help": "Grid resolution M of the value grid."}),
    "paths": ("paths", {"type": int, "help": "Number of Monte Carlo paths."}),
    "seed": ("seed", {"type": int, "metavar": "U64", "help": "Master seed."}),
    "lambda": ("lambda_range", {"metavar": "A:B:STEP", "help": "Transverse field range, inclusive."}),
    "out": ("out", {"metavar": "DIR", "help": "Output directory (default MFGS_RUNS_DIR)."}),
    "format": ("format", {"choices": FORMATS, "default": "csv", "help": "Table format."}),
    "band": ("band", {"type": float, "help": "Relative band for counting global minima (default 1e-8)."}),
    "selection": ("selection", {"choices": SELECTIONS, "default": "chi0", "help": "Well selection rule."}),
    "m0": ("m0", {"metavar": "COUNTS", "help": "Start point as comma separated counts."}),
    "m1": ("m1", {"metavar": "COUNTS", "help": "End point as comma separated counts."}),
    "chain": ("chain", {"choices": CHAINS, "default": "feynman-kac", "help": "Chain to simulate."}),
    "dynamics": ("dynamics", {"choices": DYNAMICS, "default": "default", "help": "Feynman-Kac dynamics."}),
    "stencil": ("stencil", {"type": int, "help": "Lax-Oleinik stencil radius (default 3)."}),
    "tolerance": ("tolerance", {"type": float, "help": "Acceptance tolerance (default 1e-10)."}),
}


class LabCommand(BaseCommand):
    """
    Base of the lab commands.

    Subclasses list the flags they accept in `flags` and implement
    `compute(spec, config)`. The runner reads `record` after the command
    returns or fails and turns it into a manifest entry.
    """

    requires_system_checks = []
    command_name: str = ""
    flags: tuple[str, ...] = ("model", "out", "format")

    def add_arguments(self, parser: CommandParser) -> None:
        for flag in self.flags:
            dest, kwargs = FLAGS[flag]
            parser.add_argument(f"--{flag}", dest=dest, **kwargs)

    def __config(self, options: dict[str, Any]) -> dict[str, Any]:
        data: dict[str, Any] = {"command": self.command_name}
        for flag in self.flags:
            dest, _ = FLAGS[flag]
            data[dest] = options.get(dest)
        serializer = RunConfigSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return dict(serializer.validated_data)

    def __run_dir(self, out: Path) -> Path:
        stamp: str = datetime.now().strftime("%Y%m%dT%H%M%S-%f")
        run_dir = out / f"{self.command_name}-{stamp}"
        run_dir.mkdir(parents=True, exist_ok=False)
        return run_dir

    def handle(self, *args: Any, **options: Any) -> None:
        start_time: datetime = datetime.now()
        self.record: dict[str, Any] = {
            "command": self.command_name,
            "out": options.get("out") or settings.MFGS_RUNS_DIR,
            "seed": options.get("seed"),
            "inputs": {},
            "run_dir": None,
        }
        config = self.__config(options)
        self.record["out"] = str(config["out"])
        self.record["inputs"] = config
        self.run_dir: Path = self.__run_dir(config["out"])
        self.record["run_dir"] = str(self.run_dir)
        self.format: str = config["format"]

        spec: ModelSpec = load_model(config["model"])
        self.compute(spec, config)

        self.stdout.write(
            self.style.SUCCESS(
                f"{self.command_name} finished in "
                f"{(datetime.now() - start_time).total_seconds()} seconds; outputs in {self.run_dir}"
            )
        )

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        raise NotImplementedError

    # ----------------------------------------------
    # Outputs
    #
    def table(self, stem: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = write_table(self.run_dir / stem, header, rows, self.format)
        logger.debug("Wrote %s", path)
        return path

    def document(self, name: str, document: Any) -> Path:
        path = write_json(self.run_dir / f"{name}.json", document)
        logger.debug("Wrote %s", path)
        return path

    def require(self, condition: bool, field: str, message: str) -> None:
        """Raise a field error the same way the config serializer does."""
        if not condition:
            raise serializers.ValidationError({field: message})
