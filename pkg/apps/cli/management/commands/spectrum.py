# Python modules
from typing import Any

# Project modules
from apps.cli.command import LabCommand
from apps.modelspec.spec import ModelSpec
from apps.spectral.ground import ground_state, spectrum_header, spectrum_rows
from apps.spectral.lumped import assemble


class Command(LabCommand):
    help = "Ground state of the lumped operator: table of (counts, m, h, psi_N) and R_N^1 per N"

    command_name = "spectrum"
    flags = ("model", "N", "out", "format")

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        summary: list[dict[str, Any]] = []
        for N in config["N"]:
            gs = ground_state(assemble(spec, N))
            self.table(f"spectrum_N{N}", spectrum_header(spec.d), spectrum_rows(gs))
            summary.append(
                {
                    "N": N,
                    "R1": gs.R1,
                    "R1_per_spin": gs.R1 / N,
                    "eigenvalue": gs.eigenvalue,
                    "iterations": gs.iterations,
                    "residual": gs.residual,
                    "argmin_psi": gs.argmin_psi(),
                }
            )
            self.stdout.write(f"N={N}: R_N^1 = {gs.R1:.12g} ({gs.iterations} iterations)")
        self.document("spectrum", {"model": str(spec), "d": spec.d, "results": summary})
