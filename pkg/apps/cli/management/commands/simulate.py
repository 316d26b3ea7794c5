# Python modules
from typing import Any

# Project modules
from apps.cli.command import LabCommand
from apps.mc_sim.sampler import estimate_Z, sample_ground_chain
from apps.modelspec.spec import ModelSpec
from apps.spectral.ground import ground_state
from apps.spectral.lumped import assemble


def nearly_uniform(d: int, N: int) -> list[int]:
    """Grid point closest to the uniform law; the remainder goes to the first labels."""
    base, extra = divmod(N, d)
    return [base + (1 if a < extra else 0) for a in range(d)]


class Command(LabCommand):
    help = "Feynman-Kac estimate of <m1|e^{T S_N}|m0>, or terminal law of the ground-state chain"

    command_name = "simulate"
    flags = ("model", "N", "T", "paths", "seed", "m0", "m1", "chain", "dynamics", "out", "format")

    def __feynman_kac(self, spec: ModelSpec, config: dict[str, Any], op) -> None:
        N: int = op.N
        m0 = config["m0"] or nearly_uniform(spec.d, N)
        estimate = estimate_Z(
            spec, N, m0, config["m1"], config["T"], config["paths"], config["seed"],
            dynamics=config["dynamics"], op=op,
        )
        self.document("estimate", estimate.to_record())
        self.stdout.write(
            f"mean {estimate.mean:.6e} ± {estimate.std_error:.2e}, "
            f"{estimate.hits}/{estimate.n_paths} hits ({estimate.status})"
        )

    def __ground(self, spec: ModelSpec, config: dict[str, Any], op) -> None:
        gs = ground_state(op)
        sample = sample_ground_chain(
            spec, gs, op.N, config["m0"], config["T"], config["paths"], config["seed"], op=op
        )
        nu = sample.nu / sample.nu.sum()
        header = [f"count_{a}" for a in range(spec.d)] + ["empirical", "nu"]
        rows = [[*(int(c) for c in counts), e, n] for counts, e, n in zip(sample.points, sample.empirical, nu)]
        self.table("ground_chain", header, rows)
        self.document(
            "ground_chain",
            {
                "N": op.N,
                "T": sample.T,
                "n_paths": sample.n_paths,
                "seed": sample.seed,
                "m0": config["m0"],
                "total_variation": sample.total_variation,
            },
        )
        self.stdout.write(f"total variation to nu_N: {sample.total_variation:.4f}")

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        op = assemble(spec, config["N"][0])
        if config["chain"] == "ground":
            self.__ground(spec, config, op)
        else:
            self.__feynman_kac(spec, config, op)
