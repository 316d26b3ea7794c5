# Python modules
from typing import Any, Optional

# Project modules
from apps.cli.command import LabCommand
from apps.hj_halfspin.effective import field_constant, p_body_critical
from apps.hj_halfspin.profile import admissible_psi
from apps.modelspec.spec import ModelSpec


SWEEP_NODES: int = 401
# A change of max |minimizer| larger than this between neighbours is a jump.
JUMP_THRESHOLD: float = 0.1
SWEEP_HEADER: tuple[str, ...] = ("lambda", "r1", "minima", "max_abs_minimum", "shocks")


def critical_field(spec: ModelSpec) -> Optional[dict[str, float]]:
    """Closed-form critical field of a spin-1/2 p-body preset, in the units of the model file."""
    p = spec.preset.get("p_body")
    if p is None or spec.d != 2 or p <= 2 or field_constant(spec) <= 0:
        return None
    point = p_body_critical(p)
    scale: float = float(spec.preset.get("coefficient", 1.0)) * spec.field_strength / field_constant(spec)
    return {
        "p": p,
        "lambda_c": point.lambda_c * scale,
        "m_hat": point.m_hat,
        "lambda_c_check": point.lambda_c_check * scale,
    }


class Command(LabCommand):
    help = "Sweep the transverse field: r1, number of global minima and shocks per lambda"

    command_name = "sweep-lambda"
    flags = ("model", "lambda", "band", "selection", "out", "format")

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        rows: list[list[Any]] = []
        records: list[dict[str, Any]] = []
        for lam in config["lambda_range"]:
            profile = admissible_psi(
                spec.with_field_strength(lam),
                selection=config["selection"],
                nodes=SWEEP_NODES,
                band=config["band"],
            )
            largest: float = max(abs(m) for m in profile.minima)
            rows.append([lam, profile.r1, len(profile.minima), largest, len(profile.shocks)])
            records.append(
                {
                    "lambda": lam,
                    "r1": profile.r1,
                    "minima": list(profile.minima),
                    "selected": list(profile.selected),
                    "status": profile.status,
                    "shocks": list(profile.shocks),
                }
            )

        jumps = [
            [rows[i][0], rows[i + 1][0]]
            for i in range(len(rows) - 1)
            if abs(rows[i + 1][3] - rows[i][3]) > JUMP_THRESHOLD
        ]
        self.table("sweep", SWEEP_HEADER, rows)
        self.document(
            "sweep",
            {"model": str(spec), "sweep": records, "jumps": jumps, "critical": critical_field(spec)},
        )
        for low, high in jumps:
            self.stdout.write(f"minimizer jump between lambda={low:.6g} and lambda={high:.6g}")
