"""
Viscosity solutions psi of H(m, psi'(m)) + r1 = 0 on [-1, 1].

With Phi the antiderivative of theta and S a set of selected minima of V,

    psi(m) = min over s in S of |Phi(m) - Phi(s)|.

Between two consecutive selected minima psi has exactly one upper kink
(a shock) where the two branches meet.
"""

# Python modules
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Optional

# Third party modules
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError, StructureViolation
from apps.hj_halfspin.effective import (
    MinimaResult,
    chi0,
    field_constant,
    interaction_in_m,
    r1_and_minima,
    zero_order_correction,
)
from apps.modelspec.spec import ModelSpec


logger = logging.getLogger(__name__)

Selection = Literal["chi0", "spectral"]
SELECTIONS: tuple[str, ...] = ("chi0", "spectral")
DEFAULT_NODES: int = 2001
QUAD_EPSABS: float = 1e-12
TIE_TOL: float = 1e-8
FD_STEP: float = 1e-6
FD_TOL: float = 1e-5
FD_MARGIN: float = 0.95
SHOCK_TOL: float = 1e-4
LOWER_KINK_TOL: float = 1e-4
KINK_SLOPE_TOL: float = 1e-6


# ----------------------------------------------
# Profile
#
@dataclass(frozen=True, eq=False)
class HJProfile:
    """
    Tabulated psi together with the data that produced it.

    status is "ok" or "ambiguous"; an ambiguous profile carries no psi
    table, only the candidate profiles in `candidates`.
    """

    spec: ModelSpec
    r1: float
    minima: tuple[float, ...]
    selected: tuple[float, ...]
    selection: str
    status: str
    nodes: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    branch: np.ndarray
    shocks: tuple[float, ...]
    chi0_values: dict[float, float] = field(default_factory=dict)
    corrections: dict[float, float] = field(default_factory=dict)
    candidates: tuple["HJProfile", ...] = ()

    @property
    def is_ambiguous(self) -> bool:
        return self.status == "ambiguous"

    def _require_table(self) -> None:
        if self.is_ambiguous:
            raise DomainError("Ambiguous profile has no psi; pick one of the candidates")

    def theta_at(self, m: float) -> float:
        return _theta_function(self.spec, self.r1)(m)

    def phi_at(self, m: float) -> float:
        """Phi(m) by quadrature from the nearest node."""
        if abs(m) > 1.0:
            raise DomainError(f"Magnetization {m} outside [-1, 1]")
        j: int = int(np.argmin(np.abs(self.nodes - m)))
        start: float = float(self.nodes[j])
        if start == m:
            return float(self.phi[j])
        piece, _ = quad(_theta_function(self.spec, self.r1), start, m, epsabs=QUAD_EPSABS, limit=200)
        return float(self.phi[j] + piece)

    def psi_at(self, m: float) -> float:
        self._require_table()
        value: float = self.phi_at(m)
        anchors = [self.phi_at(s) for s in self.selected]
        return float(min(abs(value - a) for a in anchors))

    def summary(self) -> dict[str, Any]:
        return {
            "model": self.spec.name,
            "r1": self.r1,
            "minima": list(self.minima),
            "selected": list(self.selected),
            "selection": self.selection,
            "status": self.status,
            "shocks": list(self.shocks),
            "chi0": {f"{m:.12g}": v for m, v in self.chi0_values.items()},
            "zero_order_correction": {f"{m:.12g}": v for m, v in self.corrections.items()},
            "candidates": [list(c.selected) for c in self.candidates],
        }


PROFILE_HEADER: tuple[str, ...] = ("m", "theta", "psi", "branch")


def profile_rows(profile: HJProfile) -> list[tuple[float, float, float, int]]:
    """Rows m, theta, psi, branch; branch indexes `profile.selected`."""
    profile._require_table()
    return [
        (float(m), float(t), float(p), int(b))
        for m, t, p, b in zip(profile.nodes, profile.theta, profile.psi, profile.branch)
    ]


# ----------------------------------------------
# Construction
#
def _theta_function(spec: ModelSpec, r1: float) -> Callable[[float], float]:
    """Scalar theta(m) with the interaction polynomial hoisted out."""
    k: float = field_constant(spec)
    poly = interaction_in_m(spec)

    def theta(m: float) -> float:
        root: float = np.sqrt(max(1.0 - m * m, 0.0))
        if root == 0.0:
            return np.inf
        argument: float = (k - r1 - poly(m)) / (k * root)
        return 0.5 * float(np.arccosh(max(argument, 1.0)))

    return theta


def _node_grid(count: int, extra: tuple[float, ...]) -> np.ndarray:
    grid = np.concatenate([np.linspace(-1.0, 1.0, count), np.asarray(extra, dtype=float)])
    return np.unique(grid)


def _antiderivative(theta: Callable[[float], float], nodes: np.ndarray) -> np.ndarray:
    """Phi on the nodes, Phi(-1) = 0, one adaptive quadrature per panel."""
    pieces = np.zeros(nodes.size)
    for j in range(1, nodes.size):
        pieces[j], _ = quad(theta, nodes[j - 1], nodes[j], epsabs=QUAD_EPSABS, limit=200)
    return np.cumsum(pieces)


def _shocks(theta, nodes: np.ndarray, phi: np.ndarray, selected: tuple[float, ...]) -> tuple[float, ...]:
    """Points between consecutive selected minima where Phi hits the midpoint."""

    def phi_at(m: float) -> float:
        j: int = int(np.searchsorted(nodes, m, side="right")) - 1
        j = min(max(j, 0), nodes.size - 1)
        piece, _ = quad(theta, nodes[j], m, epsabs=QUAD_EPSABS, limit=200)
        return phi[j] + piece

    found: list[float] = []
    for left, right in zip(selected[:-1], selected[1:]):
        target: float = 0.5 * (phi_at(left) + phi_at(right))
        found.append(float(brentq(lambda m: phi_at(m) - target, left, right, xtol=1e-13)))
    return tuple(found)


def profile_from_selection(
    spec: ModelSpec,
    selected: tuple[float, ...] | list[float],
    r1: Optional[float] = None,
    minima: Optional[tuple[float, ...]] = None,
    nodes: int = DEFAULT_NODES,
    selection: str = "manual",
) -> HJProfile:
    """
    Build psi from an explicit set of minima.

    Any set is accepted, including points that are not minima of V; the
    result then fails viscosity_structure_check.
    """
    if not selected:
        raise DomainError("At least one selected minimum is required")
    chosen: tuple[float, ...] = tuple(sorted(float(s) for s in selected))
    if any(abs(s) >= 1.0 for s in chosen):
        raise DomainError("Selected minima must lie inside (-1, 1)")
    if r1 is None or minima is None:
        found: MinimaResult = r1_and_minima(spec)
        r1 = found.r1 if r1 is None else r1
        minima = found.minima if minima is None else minima

    theta = _theta_function(spec, r1)
    grid = _node_grid(nodes, chosen)
    theta_table = np.array([theta(m) for m in grid])
    phi = _antiderivative(theta, grid)
    anchors = np.array([phi[np.searchsorted(grid, s)] for s in chosen])
    gaps = np.abs(phi[:, None] - anchors[None, :])
    shocks = _shocks(theta, grid, phi, chosen)

    interior = [m for m in minima if abs(m) < 1.0]
    chi_values = {m: float(chi0(spec, m)) for m in interior}
    corrections = {m: float(zero_order_correction(spec, m)) for m in interior if chi_values[m] >= 0}
    logger.info("Profile for %s: selected %s, %d shock(s)", spec, chosen, len(shocks))
    return HJProfile(
        spec=spec,
        r1=float(r1),
        minima=tuple(minima),
        selected=chosen,
        selection=selection,
        status="ok",
        nodes=grid,
        theta=theta_table,
        phi=phi,
        psi=gaps.min(axis=1),
        branch=gaps.argmin(axis=1),
        shocks=shocks,
        chi0_values=chi_values,
        corrections=corrections,
    )


def _tied(scores: dict[float, float]) -> tuple[float, ...]:
    best: float = min(scores.values())
    return tuple(m for m, v in scores.items() if v <= best + TIE_TOL * (1.0 + abs(best)))


def _is_reflection_pair(spec: ModelSpec, points: tuple[float, ...]) -> bool:
    if len(points) != 2:
        return False
    return abs(points[0] + points[1]) <= settings.MFGS_MERGE_TOL and spec.interaction.is_reflection_symmetric()


def admissible_psi(
    spec: ModelSpec,
    selection: Selection = "chi0",
    nodes: int = DEFAULT_NODES,
    band: Optional[float] = None,
) -> HJProfile:
    """
    psi anchored at the minima picked by the selection rule.

    "chi0" keeps the minima of smallest chi0, "spectral" those of smallest
    zero_order_correction. A single winner or a reflection-symmetric pair
    is selected; any other tie gives an ambiguous profile with one
    candidate per tied minimum.
    """
    if selection not in SELECTIONS:
        raise DomainError(f"Unknown selection rule {selection!r}")
    found: MinimaResult = r1_and_minima(spec, band=band)
    minima = found.minima
    if len(minima) == 1:
        return profile_from_selection(spec, minima, found.r1, minima, nodes, selection)

    if selection == "chi0":
        scores = {m: float(chi0(spec, m)) for m in minima}
    else:
        scores = {m: float(zero_order_correction(spec, m)) for m in minima}
    winners = _tied(scores)
    if len(winners) == 1 or _is_reflection_pair(spec, winners):
        return profile_from_selection(spec, winners, found.r1, minima, nodes, selection)

    logger.warning("Selection %s is ambiguous between %s", selection, winners)
    candidates = tuple(
        profile_from_selection(spec, (m,), found.r1, minima, nodes, selection) for m in winners
    )
    empty = np.empty(0)
    return HJProfile(
        spec=spec,
        r1=found.r1,
        minima=minima,
        selected=(),
        selection=selection,
        status="ambiguous",
        nodes=empty,
        theta=empty,
        phi=empty,
        psi=empty,
        branch=np.empty(0, dtype=int),
        shocks=(),
        chi0_values=candidates[0].chi0_values,
        corrections=candidates[0].corrections,
        candidates=candidates,
    )


# ----------------------------------------------
# Structure check
#
@dataclass(frozen=True)
class StructureFailure:
    check: str
    m: float
    detail: str


@dataclass
class StructureReport:
    """Outcome of viscosity_structure_check; kinks are (m, kind) pairs."""

    failures: list[StructureFailure] = field(default_factory=list)
    kinks: list[tuple[float, str]] = field(default_factory=list)
    checked_points: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def raise_for_failures(self) -> None:
        if self.failures:
            raise StructureViolation(self.failures)


def viscosity_structure_check(profile: HJProfile, samples: int = 200) -> StructureReport:
    """
    Check that psi is a viscosity solution with the expected kinks.

    1. |psi'| = theta at smooth points with |m| <= 0.95, by central
       differences against psi_at.
    2. At each shock the one-sided slopes are +theta and -theta; the
       kink is upper, or smooth when theta vanishes there.
    3. psi has no lower kink except at zeros of theta.
    4. The tabulated psi changes slope sign only next to a selected
       minimum (lower kink) or a shock (upper kink).
    """
    profile._require_table()
    report = StructureReport()
    tol: float = FD_TOL
    h: float = FD_STEP
    excluded = list(profile.shocks) + list(profile.selected)

    # 1. eikonal at smooth points
    inside = profile.nodes[np.abs(profile.nodes) <= FD_MARGIN]
    stride: int = max(1, inside.size // samples)
    for m in inside[::stride]:
        m = float(m)
        if any(abs(m - x) < 1e-4 for x in excluded):
            continue
        slope: float = (profile.psi_at(m + h) - profile.psi_at(m - h)) / (2 * h)
        expected: float = profile.theta_at(m)
        report.checked_points += 1
        if abs(abs(slope) - expected) > tol * (1.0 + expected):
            report.failures.append(
                StructureFailure("eikonal", m, f"|psi'|={abs(slope):.8g}, theta={expected:.8g}")
            )

    # 2. shocks
    for x in profile.shocks:
        centre: float = profile.psi_at(x)
        left: float = (centre - profile.psi_at(x - h)) / h
        right: float = (profile.psi_at(x + h) - centre) / h
        expected = profile.theta_at(x)
        if expected <= tol:
            report.kinks.append((x, "smooth"))
            continue
        if max(abs(left - expected), abs(right + expected)) > SHOCK_TOL * (1.0 + expected):
            report.failures.append(
                StructureFailure("shock", x, f"slopes {left:.8g}/{right:.8g}, theta={expected:.8g}")
            )
        else:
            report.kinks.append((x, "upper"))

    # 3. lower kinks sit at the selected minima; theta must vanish there
    for s in profile.selected:
        value: float = profile.theta_at(s)
        if value > LOWER_KINK_TOL:
            report.failures.append(
                StructureFailure("lower_kink", s, f"psi has a lower kink where theta={value:.8g}")
            )
        else:
            report.kinks.append((s, "minimum"))

    # 4. kinks of the tabulated psi
    spacing = np.diff(profile.nodes)
    slopes = np.diff(profile.psi) / spacing
    reach: float = 2.0 * float(spacing.max())
    for j in range(1, profile.nodes.size - 1):
        m = float(profile.nodes[j])
        left, right = float(slopes[j - 1]), float(slopes[j])
        if abs(m) > FD_MARGIN or min(abs(left), abs(right)) <= KINK_SLOPE_TOL or np.sign(left) == np.sign(right):
            continue
        kind: str = "lower" if right > left else "upper"
        allowed = profile.selected if kind == "lower" else profile.shocks
        if not any(abs(m - x) <= reach for x in allowed):
            report.failures.append(
                StructureFailure("table_kink", m, f"{kind} kink in the table, slopes {left:.8g}/{right:.8g}")
            )

    if report.failures:
        logger.warning("Profile for %s has %d structure failure(s)", profile.spec, len(report.failures))
    return report
