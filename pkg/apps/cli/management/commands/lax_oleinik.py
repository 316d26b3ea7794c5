# Python modules
import logging
from typing import Any

# Third party modules
import numpy as np

# Project modules
from apps.cli.command import LabCommand
from apps.hj_halfspin.profile import admissible_psi
from apps.lax_oleinik.scheme import (
    DEFAULT_STENCIL,
    VALUE_GRID_HEADER_SUFFIX,
    evolve,
    fixed_point_residual,
    minima_containment,
    scheme_for,
    value_grid_from_function,
    value_grid_from_profile,
    value_grid_rows,
)
from apps.modelspec.spec import ModelSpec
from apps.potentials.fields import V


logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = (
        "Evolve a table under the discrete Lax-Oleinik semigroup. Two-label models start "
        "from the analytic psi and report its fixed-point residual; others start from V"
    )

    command_name = "lax-oleinik"
    flags = ("model", "mesh", "dt", "T", "stencil", "band", "selection", "out", "format")

    def __initial(self, spec: ModelSpec, config: dict[str, Any]):
        if spec.d == 2 and spec.kernel[0, 1] > 0:
            profile = admissible_psi(spec, selection=config["selection"], band=config["band"])
            if profile.is_ambiguous:
                logger.warning("Ambiguous selection; using the candidate anchored at %s", profile.candidates[0].selected)
                profile = profile.candidates[0]
            return value_grid_from_profile(profile, config["mesh"], config["dt"]), profile.r1
        table = value_grid_from_function(
            spec, config["mesh"], config["dt"], lambda coords: np.asarray(V(spec, coords))
        )
        return table, None

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        stencil: int = config["stencil"] or DEFAULT_STENCIL
        initial, r1 = self.__initial(spec, config)
        scheme = scheme_for(spec, initial, stencil)
        evolved = evolve(spec, initial, config["T"], stencil, scheme)
        report = minima_containment(spec, evolved, band=config["band"])

        summary: dict[str, Any] = {
            "model": str(spec),
            "mesh": config["mesh"],
            "dt": config["dt"],
            "T": config["T"],
            "stencil": stencil,
            "initial": "analytic-psi" if r1 is not None else "V",
            "minima": {
                "counts": report.counts,
                "coords": report.coords,
                "on_boundary": report.on_boundary,
                "distances": report.distances,
                "v_minimizers": report.v_minimizers,
                "tolerance": report.tolerance,
                "contained": report.contained,
            },
        }
        if r1 is not None:
            residual = fixed_point_residual(spec, initial, r1, config["T"], stencil, scheme)
            summary["r1"] = r1
            summary["residual"] = residual
            self.stdout.write(f"fixed-point residual {residual:.3e}")

        header = [f"count_{a}" for a in range(spec.d)] + [VALUE_GRID_HEADER_SUFFIX]
        self.table("value_grid", header, value_grid_rows(evolved))
        self.document("lax_oleinik", summary)
        self.stdout.write(f"{len(report.counts)} local minima, contained: {report.contained}")
