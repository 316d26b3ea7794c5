"""
Semi-Lagrangian discretization of the Lax-Oleinik semigroup

    U_dt u(m) = min over m0 of { u(m0) + dt L((m + m0)/2, (m - m0)/dt) }

on the simplex grid of resolution M. Predecessors m0 are the grid points
within S moves of m, plus fractional points q/Q along every single-move
ray whose values are interpolated linearly.
"""

# Python modules
import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

# Third party modules
import numpy as np

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.constants import is_forbidden
from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec
from apps.potentials.fields import V
from apps.potentials.legendre import L0_closed_d2, L0_numeric
from apps.simplex.grid import Move, SimplexGrid, enumerate_grid


logger = logging.getLogger(__name__)

DEFAULT_STENCIL: int = 3


@dataclass(frozen=True, eq=False)
class ValueGrid:
    """A function on the simplex grid together with the time step it is evolved with."""

    grid: SimplexGrid
    values: np.ndarray
    time_step: float

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.grid),):
            raise DomainError("Values do not match the grid", {"values": self.values.shape[0], "grid": len(self.grid)})

    @property
    def mesh(self) -> int:
        return self.grid.N

    def with_values(self, values: np.ndarray) -> "ValueGrid":
        return ValueGrid(grid=self.grid, values=values, time_step=self.time_step)


def ray_fractions(M: int) -> int:
    """Q = max(4, ceil(M / 100))."""
    return max(4, math.ceil(M / 100))


def dt_max(spec: ModelSpec, M: int, stencil: int = DEFAULT_STENCIL) -> float:
    """Largest time step with dt * max kappa <= S / M."""
    return stencil / (M * float(np.max(spec.rates.kappa_alpha)))


def _displacements(d: int, stencil: int) -> np.ndarray:
    """Integer zero-sum vectors with half l1 norm at most `stencil`, the zero vector first."""
    out: list[tuple[int, ...]] = []
    for head in product(range(-stencil, stencil + 1), repeat=d - 1):
        delta = (*head, -sum(head))
        if sum(abs(x) for x in delta) <= 2 * stencil:
            out.append(delta)
    out.sort(key=lambda x: (sum(abs(c) for c in x), x))
    return np.array(out, dtype=np.int64)


def _lagrangian(spec: ModelSpec, mid: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    if spec.d == 2:
        cost = L0_closed_d2(spec, mid[:, 1] - mid[:, 0], velocity[:, 1] - velocity[:, 0])
    else:
        cost = L0_numeric(spec, mid, velocity)
    return np.asarray(cost) + np.asarray(V(spec, mid))


@dataclass(eq=False)
class LaxOleinikScheme:
    """Cached candidate table of one (spec, M, dt, stencil) combination."""

    spec: ModelSpec
    grid: SimplexGrid
    dt: float
    stencil: int
    targets: np.ndarray
    source: np.ndarray
    partner: np.ndarray
    weight: np.ndarray
    cost: np.ndarray
    offsets: np.ndarray = field(repr=False)

    @classmethod
    def build(
        cls,
        spec: ModelSpec,
        M: int,
        dt: float,
        stencil: int = DEFAULT_STENCIL,
        grid: Optional[SimplexGrid] = None,
    ) -> "LaxOleinikScheme":
        spec.require_valid()
        if stencil < 1:
            raise DomainError(f"Stencil must be at least 1, got {stencil}")
        limit: float = dt_max(spec, M, stencil)
        if not 0 < dt <= limit:
            raise DomainError("Time step outside (0, dt_max]", {"dt": dt, "dt_max": limit})
        grid = enumerate_grid(M, spec.d) if grid is None else grid
        points = grid.points
        n: int = len(grid)
        pieces: list[tuple[np.ndarray, ...]] = []

        # whole-grid predecessors m0 = m - delta / M
        for delta in _displacements(spec.d, stencil):
            origin = points - delta
            ok = np.all(origin >= 0, axis=1)
            targets = np.flatnonzero(ok)
            if not targets.size:
                continue
            source = grid.index_of(origin[ok])
            fractions = np.zeros(targets.size)
            pieces.append(_candidates(spec, points, M, dt, targets, source, source, fractions, delta[None, :]))

        # fractional predecessors m0 = m - (q/Q) e / M between m and its neighbor m - e
        Q: int = ray_fractions(M)
        table = grid.neighbor_table()
        for k, move in enumerate(grid.moves):
            back: int = grid.moves.index(Move(move.to_label, move.from_label, spec.d))
            targets = np.flatnonzero(table[:, back] >= 0)
            if not targets.size:
                continue
            neighbor = table[targets, back]
            for q in range(1, Q):
                fraction: float = q / Q
                pieces.append(
                    _candidates(
                        spec,
                        points,
                        M,
                        dt,
                        targets,
                        targets,
                        neighbor,
                        np.full(targets.size, fraction),
                        fraction * move.displacement[None, :],
                    )
                )

        targets, source, partner, weight, cost = (np.concatenate(column) for column in zip(*pieces))
        finite = ~is_forbidden(cost)
        order = np.argsort(targets[finite], kind="stable")
        targets, source, partner, weight, cost = (
            a[finite][order] for a in (targets, source, partner, weight, cost)
        )
        counts = np.bincount(targets, minlength=n)
        if np.any(counts == 0):
            raise DomainError("Grid point with an empty feasible stencil", {"points": int(np.sum(counts == 0))})
        offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
        logger.debug("Lax-Oleinik scheme: %d points, %d candidates, Q=%d", n, targets.size, Q)
        return cls(
            spec=spec,
            grid=grid,
            dt=dt,
            stencil=stencil,
            targets=targets,
            source=source,
            partner=partner,
            weight=weight,
            cost=cost,
            offsets=offsets,
        )

    def step(self, values: np.ndarray) -> np.ndarray:
        candidate = (1.0 - self.weight) * values[self.source] + self.weight * values[self.partner] + self.cost
        return np.minimum.reduceat(candidate, self.offsets)

    def evolve(self, values: np.ndarray, steps: int) -> np.ndarray:
        out = np.asarray(values, dtype=float)
        for _ in range(steps):
            out = self.step(out)
        return out


def _candidates(
    spec: ModelSpec,
    points: np.ndarray,
    M: int,
    dt: float,
    targets: np.ndarray,
    source: np.ndarray,
    partner: np.ndarray,
    weight: np.ndarray,
    displacement: np.ndarray,
) -> tuple[np.ndarray, ...]:
    """Rows (target, source, partner, weight, cost) for one displacement."""
    here = points[targets] / float(M)
    step = np.broadcast_to(displacement / float(M), here.shape)
    cost = dt * _lagrangian(spec, here - 0.5 * step, step / dt)
    return targets, np.asarray(source), np.asarray(partner), weight, np.atleast_1d(cost)


# ----------------------------------------------
# Semigroup
#
def _steps_for(T: float, dt: float) -> int:
    if T < 0:
        raise DomainError(f"Time must be nonnegative, got {T}")
    k: int = round(T / dt)
    if abs(k * dt - T) > 1e-9 * max(1.0, T):
        raise DomainError("T is not a whole number of time steps", {"T": T, "dt": dt})
    return k


def scheme_for(spec: ModelSpec, vg: ValueGrid, stencil: int = DEFAULT_STENCIL) -> LaxOleinikScheme:
    return LaxOleinikScheme.build(spec, vg.mesh, vg.time_step, stencil, grid=vg.grid)


def one_step(
    spec: ModelSpec,
    vg: ValueGrid,
    stencil: int = DEFAULT_STENCIL,
    scheme: Optional[LaxOleinikScheme] = None,
) -> ValueGrid:
    scheme = scheme_for(spec, vg, stencil) if scheme is None else scheme
    return vg.with_values(scheme.step(vg.values))


def evolve(
    spec: ModelSpec,
    vg: ValueGrid,
    T: float,
    stencil: int = DEFAULT_STENCIL,
    scheme: Optional[LaxOleinikScheme] = None,
) -> ValueGrid:
    """k = T / dt applications of one_step."""
    steps: int = _steps_for(T, vg.time_step)
    if steps == 0:
        return vg.with_values(vg.values.copy())
    scheme = scheme_for(spec, vg, stencil) if scheme is None else scheme
    return vg.with_values(scheme.evolve(vg.values, steps))


def fixed_point_residual(
    spec: ModelSpec,
    psi_table: ValueGrid,
    r1: float,
    T: float,
    stencil: int = DEFAULT_STENCIL,
    scheme: Optional[LaxOleinikScheme] = None,
) -> float:
    """sup over interior points of |U_T psi - T r1 - psi|."""
    evolved = evolve(spec, psi_table, T, stencil, scheme)
    gap = evolved.values - T * r1 - psi_table.values
    interior = psi_table.grid.interior_mask()
    residual: float = float(np.max(np.abs(gap[interior])))
    logger.info("Fixed-point residual %.3e at M=%d, dt=%g, T=%g", residual, psi_table.mesh, psi_table.time_step, T)
    return residual


# ----------------------------------------------
# Sampling
#
def value_grid_from_function(
    spec: ModelSpec,
    M: int,
    dt: float,
    function: Callable[[np.ndarray], np.ndarray],
) -> ValueGrid:
    """Tabulate function(coords) on the grid of resolution M."""
    grid = enumerate_grid(M, spec.d)
    values = np.asarray(function(grid.coords()), dtype=float)
    return ValueGrid(grid=grid, values=values, time_step=dt)


def value_grid_from_profile(profile, M: int, dt: float) -> ValueGrid:
    """Sample an analytic two-label psi at the magnetizations of the grid."""
    grid = enumerate_grid(M, 2)
    values = np.array([profile.psi_at(float(m)) for m in grid.magnetization()])
    return ValueGrid(grid=grid, values=values, time_step=dt)


VALUE_GRID_HEADER_SUFFIX: str = "value"


def value_grid_rows(vg: ValueGrid) -> list[list[float | int]]:
    """Rows counts..., value."""
    return [[*(int(c) for c in counts), float(v)] for counts, v in zip(vg.grid.points, vg.values)]


# ----------------------------------------------
# Minima
#
@dataclass(frozen=True)
class MinimaReport:
    """Local minima of a table compared against the grid minimizers of V."""

    counts: np.ndarray
    coords: np.ndarray
    values: np.ndarray
    on_boundary: np.ndarray
    is_global: np.ndarray
    distances: np.ndarray
    v_minimizers: np.ndarray
    tolerance: float

    @property
    def contained(self) -> bool:
        return bool(not np.any(self.on_boundary) and np.all(self.distances <= self.tolerance))


def _grid_local_minima(grid: SimplexGrid, values: np.ndarray) -> np.ndarray:
    table = grid.neighbor_table()
    padded = np.where(table >= 0, values[np.maximum(table, 0)], np.inf)
    return np.flatnonzero(np.all(values[:, None] <= padded, axis=1))


def minima_containment(spec: ModelSpec, vg: ValueGrid, band: Optional[float] = None) -> MinimaReport:
    """
    Local minima of vg.values with their distance (sup norm in coordinates)
    to the nearest grid minimizer of V. Contained means no minimum sits
    on the boundary and each is within 2/M of a V minimizer.
    """
    band = settings.MFGS_MULTIWELL_BAND if band is None else band
    grid = vg.grid
    coords = grid.coords()
    potential = np.asarray(V(spec, coords))
    candidates = _grid_local_minima(grid, potential)
    floor: float = float(potential[candidates].min())
    v_min = coords[candidates[potential[candidates] <= floor + band * (1.0 + abs(floor))]]

    found = _grid_local_minima(grid, vg.values)
    gaps = np.abs(coords[found][:, None, :] - v_min[None, :, :]).max(axis=2)
    lowest: float = float(vg.values.min())
    report = MinimaReport(
        counts=grid.points[found],
        coords=coords[found],
        values=vg.values[found],
        on_boundary=~grid.interior_mask()[found],
        is_global=vg.values[found] <= lowest + band * (1.0 + abs(lowest)),
        distances=gaps.min(axis=1),
        v_minimizers=v_min,
        tolerance=2.0 / grid.N,
    )
    if np.any(report.on_boundary):
        logger.warning("%d table minima lie on the boundary", int(report.on_boundary.sum()))
    return report
