"""
Model specifications: rate kernel, polynomial interaction and presets.

Every object here is immutable; operations are pure functions.
"""

# Python modules
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

# Third party modules
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError, SpecValidationError
from apps.modelspec.kernels import Convention, half_integer, spin_labels, spin_s_kernel
from apps.modelspec.polynomial import Polynomial, linear_form_power


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivedRates:
    """Row sums of the kernel."""

    kappa_alpha: np.ndarray
    kappa_total: float
    kappa_regular: Optional[float]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_spec."""

    violations: tuple[str, ...]
    rates: Optional[DerivedRates]

    @property
    def is_valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    Mean-field model: d labels, symmetric kernel K, interaction F.

    field_strength is the lambda the presets multiply the transverse
    term with; for hand-written kernels it is informational only.
    """

    d: int
    labels: tuple
    kernel: np.ndarray
    interaction: Polynomial
    field_strength: float = 0.0
    name: str = ""
    preset: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        kernel = np.array(self.kernel, dtype=float)
        kernel.setflags(write=False)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "labels", tuple(self.labels))

    def __str__(self) -> str:
        """Magic str method."""
        return self.name or f"ModelSpec(d={self.d}, lambda={self.field_strength})"

    @property
    def rates(self) -> DerivedRates:
        return derived_rates(self.kernel)

    def require_valid(self) -> "ModelSpec":
        report: ValidationReport = validate_spec(self)
        if not report.is_valid:
            raise SpecValidationError(list(report.violations))
        return self

    def with_field_strength(self, lam: float) -> "ModelSpec":
        """Same model with the transverse field rescaled to lam."""
        if lam < 0:
            raise DomainError(f"Field strength must be nonnegative, got {lam}")
        if self.preset.get("kernel") == "spin_s":
            _, kernel = spin_s_kernel(
                Fraction(self.preset["s"]), lam, self.preset.get("convention", "spin")
            )
        elif self.field_strength > 0:
            kernel = self.kernel * (lam / self.field_strength)
        else:
            raise DomainError("Cannot rescale a kernel whose field strength is zero")
        return replace(self, kernel=kernel, field_strength=float(lam))


def derived_rates(kernel: np.ndarray, tol: float = 1e-14) -> DerivedRates:
    kappa = np.asarray(kernel, dtype=float).sum(axis=1)
    regular: Optional[float] = None
    if kappa.size and np.ptp(kappa) <= tol * max(1.0, float(np.max(np.abs(kappa)))):
        regular = float(kappa[0])
    return DerivedRates(kappa_alpha=kappa, kappa_total=float(kappa.sum()), kappa_regular=regular)


def validate_spec(spec: ModelSpec) -> ValidationReport:
    """Collect every violated invariant; never raises."""
    violations: list[str] = []
    kernel = np.asarray(spec.kernel, dtype=float)

    if spec.d < 2:
        violations.append("d must be at least 2")
    if len(spec.labels) != spec.d:
        violations.append(f"expected {spec.d} labels, got {len(spec.labels)}")
    if len(set(spec.labels)) != len(spec.labels):
        violations.append("labels not distinct")
    if kernel.shape != (spec.d, spec.d):
        violations.append(f"kernel shape {kernel.shape} is not ({spec.d}, {spec.d})")
        return ValidationReport(tuple(violations), None)
    if not np.all(np.isfinite(kernel)):
        violations.append("kernel has non-finite entries")
    if np.any(kernel < 0):
        violations.append("kernel has negative entries")
    if not np.array_equal(kernel, kernel.T):
        violations.append("kernel not symmetric")
    if np.any(np.diag(kernel) != 0):
        violations.append("kernel diagonal not zero")
    n_components, _ = connected_components(csr_matrix(kernel > 0), directed=False)
    if n_components != 1:
        violations.append("kernel not irreducible")
    if spec.field_strength < 0:
        violations.append("field strength negative")
    if spec.interaction.terms and spec.interaction.d != spec.d:
        violations.append(
            f"interaction uses {spec.interaction.d} coordinates, expected {spec.d}"
        )

    rates: Optional[DerivedRates] = None if violations else derived_rates(kernel)
    if violations:
        logger.debug("Spec %s has %d violation(s)", spec, len(violations))
    return ValidationReport(tuple(violations), rates)


def check_simplex_point(m: Sequence[float] | np.ndarray, d: int, tol: Optional[float] = None) -> np.ndarray:
    """Return m as an array, or raise DomainError if it is off the simplex."""
    tol = settings.MFGS_SIMPLEX_TOL if tol is None else tol
    point = np.asarray(m, dtype=float)
    if point.shape[-1] != d:
        raise DomainError(f"Point has {point.shape[-1]} coordinates, expected {d}")
    if np.any(point < -tol) or np.any(np.abs(point.sum(axis=-1) - 1.0) > tol):
        raise DomainError("Point is not on the simplex", {"sum": float(np.max(point.sum(axis=-1)))})
    return point


def eval_F(spec: ModelSpec, m: Sequence[float] | np.ndarray) -> float | np.ndarray:
    """Interaction F at a simplex point (or a stack of them)."""
    point = check_simplex_point(m, spec.d)
    return spec.interaction(point)


def p_body_interaction(p: int, s: float | Fraction, coefficient: float = 1.0) -> Polynomial:
    """
    coefficient * (sum_alpha alpha m_alpha)^p in the simplex coordinates.

    For s = 1/2 the labels are the Pauli eigenvalues -1, +1, so the
    linear form is the magnetization m_1 - m_{-1}.
    """
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    spin: Fraction = half_integer(s)
    weights = (-1.0, 1.0) if spin == Fraction(1, 2) else spin_labels(spin)
    return linear_form_power(weights, p, coefficient)


# ----------------------------------------------
# Presets
#
def spin_s_model(
    s: float | Fraction,
    lam: float,
    interaction: Polynomial,
    convention: Convention = "spin",
    name: str = "",
) -> ModelSpec:
    labels, kernel = spin_s_kernel(s, lam, convention)
    return ModelSpec(
        d=len(labels),
        labels=labels,
        kernel=kernel,
        interaction=interaction,
        field_strength=float(lam),
        name=name,
        preset={"kernel": "spin_s", "s": str(half_integer(s)), "convention": convention},
    )


def spin_half_model(
    lam: float,
    interaction: Polynomial,
    convention: Convention = "pauli",
    name: str = "",
) -> ModelSpec:
    """Spin-1/2 model; Pauli convention by default."""
    return spin_s_model(Fraction(1, 2), lam, interaction, convention, name)


def curie_weiss(lam: float, convention: Convention = "pauli") -> ModelSpec:
    """F(m) = m^2/2 with transverse field lam."""
    return spin_half_model(
        lam, p_body_interaction(2, Fraction(1, 2), 0.5), convention, name=f"curie-weiss-{lam}"
    )


def p_body_model(
    p: int,
    lam: float,
    s: float | Fraction = Fraction(1, 2),
    coefficient: float = 1.0,
) -> ModelSpec:
    convention: Convention = "pauli" if half_integer(s) == Fraction(1, 2) else "spin"
    spec = spin_s_model(
        s, lam, p_body_interaction(p, s, coefficient), convention, name=f"p{p}-body-{lam}"
    )
    return replace(spec, preset={**spec.preset, "p_body": int(p), "coefficient": float(coefficient)})
