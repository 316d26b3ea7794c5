# Python modules
from typing import Any

# Project modules
from apps.abstracts.exceptions import CheckFailure
from apps.cli.command import LabCommand
from apps.modelspec.spec import ModelSpec
from apps.spectral.ground import ground_state
from apps.spectral.lumped import assemble
from apps.spectral.oracle import full_hamiltonian_oracle


class Command(LabCommand):
    help = "Compare the lumped ground energy with dense diagonalization of the full Hamiltonian"

    command_name = "oracle-check"
    flags = ("model", "N", "tolerance", "out", "format")

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        tolerance: float = config["tolerance"]
        rows: list[list[Any]] = []
        failed: list[str] = []
        for N in config["N"]:
            oracle = full_hamiltonian_oracle(spec, N)
            gs = ground_state(assemble(spec, N))
            delta: float = abs(gs.R1 - oracle.shifted_energy)
            regular = oracle.regular_R1
            regular_delta: float = float("nan") if regular is None else abs(gs.R1 - regular)
            passed: bool = delta <= tolerance and (regular is None or regular_delta <= tolerance)
            rows.append([N, gs.R1, oracle.E1, oracle.shifted_energy, delta, regular_delta, passed])
            self.stdout.write(f"N={N}: lumped vs full ground energy Δ = {delta:.3e}")
            if not passed:
                failed.append(f"N={N}")

        header = ("N", "R1", "E1", "shifted_energy", "delta", "regular_delta", "passed")
        self.table("oracle", header, rows)
        self.document("oracle", {"model": str(spec), "tolerance": tolerance, "failed": failed})
        if failed:
            raise CheckFailure(failed)
