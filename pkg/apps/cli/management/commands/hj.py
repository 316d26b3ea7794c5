# Python modules
from typing import Any

# Project modules
from apps.cli.command import LabCommand
from apps.hj_halfspin.effective import r1_and_minima, r1_via_G
from apps.hj_halfspin.profile import (
    PROFILE_HEADER,
    admissible_psi,
    profile_rows,
    viscosity_structure_check,
)
from apps.modelspec.spec import ModelSpec


class Command(LabCommand):
    help = "Analytic spin-1/2 weak-KAM profile: r1, minima, theta, psi and shocks"

    command_name = "hj"
    flags = ("model", "band", "selection", "out", "format")

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        minima = r1_and_minima(spec, band=config["band"])
        profile = admissible_psi(spec, selection=config["selection"], band=config["band"])
        summary: dict[str, Any] = profile.summary()
        summary["r1_via_G"] = r1_via_G(spec).r1
        summary["local_minima"] = list(minima.local_minima)

        tables = [profile] if not profile.is_ambiguous else list(profile.candidates)
        structure: list[dict[str, Any]] = []
        for i, table in enumerate(tables):
            stem: str = "profile" if table is profile else f"profile_candidate_{i}"
            self.table(stem, PROFILE_HEADER, profile_rows(table))
            report = viscosity_structure_check(table)
            structure.append(
                {
                    "selected": list(table.selected),
                    "passed": report.passed,
                    "kinks": [[m, kind] for m, kind in report.kinks],
                    "failures": [[f.check, f.m, f.detail] for f in report.failures],
                }
            )
        summary["structure"] = structure
        self.document("hj", summary)
        self.stdout.write(
            f"r1 = {profile.r1:.12g}, minima {list(profile.minima)}, "
            f"selected {list(profile.selected)} ({profile.status})"
        )
