# Python modules
import math
from typing import Any

# Third party modules
import numpy as np

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import CheckFailure
from apps.cli.command import LabCommand
from apps.hj_halfspin.effective import (
    chi0,
    field_constant,
    r1_and_minima,
    r1_via_G,
    zero_order_correction,
)
from apps.hj_halfspin.profile import admissible_psi, viscosity_structure_check
from apps.modelspec.spec import ModelSpec, validate_spec
from apps.potentials.bounds import L0_flow_upper_bound, L0_lower_bound
from apps.potentials.fields import H0
from apps.potentials.legendre import H0_biconjugate, L0_closed_d2, L0_numeric
from apps.spectral.ground import correction_extrapolation, ground_state
from apps.spectral.lumped import assemble
from apps.spectral.oracle import full_hamiltonian_oracle


LUMPING_MAX_N: int = 10
LEGENDRE_SAMPLES: int = 200
BICONJUGATE_TOL: float = 1e-6
CLOSED_FORM_TOL: float = 1e-9
BOUND_SLACK: float = 1e-9
R1_ROUTES_TOL: float = 1e-8
EXTRAPOLATION_NS: tuple[int, ...] = (200, 400, 800)


class Command(LabCommand):
    help = "Desk-scale consistency checks of a model; exit 1 when any check fails"

    command_name = "validate"
    flags = ("model", "N", "seed", "tolerance", "band", "selection", "out", "format")

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.checks: list[dict[str, Any]] = []

    def __check(self, name: str, passed: bool, value: float, threshold: float, detail: Any = None) -> None:
        self.checks.append(
            {"check": name, "passed": bool(passed), "value": value, "threshold": threshold, "detail": detail}
        )
        style = self.style.SUCCESS if passed else self.style.ERROR
        self.stdout.write(style(f"{name}: {'ok' if passed else 'FAILED'} ({value})"))

    def __lumping(self, spec: ModelSpec, tolerance: float) -> None:
        largest: int = min(LUMPING_MAX_N, int(math.log(settings.MFGS_ORACLE_CAP) / math.log(spec.d)))
        worst: float = 0.0
        for N in range(2, largest + 1):
            oracle = full_hamiltonian_oracle(spec, N)
            gs = ground_state(assemble(spec, N))
            worst = max(worst, abs(gs.R1 - oracle.shifted_energy))
            if oracle.regular_R1 is not None:
                worst = max(worst, abs(gs.R1 - oracle.regular_R1))
        self.__check("lumping", worst <= tolerance, worst, tolerance)

    def __legendre(self, spec: ModelSpec, seed: int) -> None:
        rng = np.random.default_rng(seed)
        d: int = spec.d
        points = rng.dirichlet(np.ones(d), size=LEGENDRE_SAMPLES)
        velocities = rng.normal(size=(LEGENDRE_SAMPLES, d))
        velocities -= velocities.mean(axis=1, keepdims=True)
        values = np.asarray(L0_numeric(spec, points, velocities))

        at_rest = np.asarray(L0_numeric(spec, points, np.zeros((LEGENDRE_SAMPLES, d))))
        rest_error: float = float(np.max(np.abs(at_rest)))
        self.__check("legendre_at_rest", rest_error <= CLOSED_FORM_TOL, rest_error, CLOSED_FORM_TOL)

        below = above = 0
        for m, v, value in zip(points, velocities, values):
            lower = max(L0_lower_bound(spec, m, v, a) for a in range(d))
            upper = L0_flow_upper_bound(spec, m, v)
            below += int(lower > value + BOUND_SLACK)
            above += int(value > upper + BOUND_SLACK)
        self.__check(
            "bounds_order", below + above == 0, below + above, 0, {"lower_bound_violations": below, "upper_bound_violations": above}
        )

        momenta = rng.normal(size=(LEGENDRE_SAMPLES, d))
        gap: float = max(
            abs(H0_biconjugate(spec, m, theta) - float(H0(spec, m, theta)))
            for m, theta in zip(points, momenta)
        )
        self.__check("biconjugacy", gap <= BICONJUGATE_TOL, gap, BICONJUGATE_TOL)

        if d == 2:
            closed = L0_closed_d2(spec, points[:, 1] - points[:, 0], velocities[:, 1] - velocities[:, 0])
            error: float = float(np.max(np.abs(values - closed)))
            self.__check("closed_form", error <= CLOSED_FORM_TOL, error, CLOSED_FORM_TOL)

    def __spin_half(self, spec: ModelSpec, config: dict[str, Any]) -> dict[str, Any]:
        minima = r1_and_minima(spec, band=config["band"])
        routes: float = abs(minima.r1 - r1_via_G(spec).r1)
        self.__check("r1_routes", routes <= R1_ROUTES_TOL, routes, R1_ROUTES_TOL)

        profile = admissible_psi(spec, selection=config["selection"], band=config["band"])
        tables = list(profile.candidates) if profile.is_ambiguous else [profile]
        failures = sum(len(viscosity_structure_check(t).failures) for t in tables)
        self.__check("viscosity_structure", failures == 0, failures, 0)

        Ns = tuple(config["N"]) if config["N"] else EXTRAPOLATION_NS
        fit = correction_extrapolation(spec, Ns)
        k: float = field_constant(spec)
        wells: dict[str, Any] = {}
        for m in minima.minima:
            if abs(m) >= 1.0:
                continue
            curvature = float(chi0(spec, m))
            wells[f"{m:.12g}"] = {
                "chi0": curvature,
                "sqrt_field_chi0": math.sqrt(k * curvature) if curvature >= 0 else math.nan,
                "zero_order_correction": float(zero_order_correction(spec, m)) if curvature >= 0 else math.nan,
            }
        first = next(iter(wells.values()), {})
        finite = {name: value for name, value in first.items() if math.isfinite(value)}
        match = min(finite, key=lambda name: abs(finite[name] - fit.c0)) if finite else None
        return {
            "r1": minima.r1,
            "minima": list(minima.minima),
            "selected": list(profile.selected),
            "status": profile.status,
            "extrapolation": {"Ns": list(fit.Ns), "r1": fit.r1, "c0": fit.c0, "c1": fit.c1},
            "order_one_candidates": wells,
            "order_one_match": match,
        }

    def compute(self, spec: ModelSpec, config: dict[str, Any]) -> None:
        report = validate_spec(spec)
        self.__check("spec", report.is_valid, len(report.violations), 0, list(report.violations))
        self.__lumping(spec, config["tolerance"])
        self.__legendre(spec, 0 if config["seed"] is None else config["seed"])

        extra: dict[str, Any] = {}
        if spec.d == 2 and field_constant(spec) > 0:
            extra = self.__spin_half(spec, config)

        self.table(
            "checks",
            ("check", "passed", "value", "threshold"),
            [[c["check"], c["passed"], c["value"], c["threshold"]] for c in self.checks],
        )
        self.document("validate", {"model": str(spec), "checks": self.checks, **extra})
        failed = [c["check"] for c in self.checks if not c["passed"]]
        if failed:
            raise CheckFailure(failed)
