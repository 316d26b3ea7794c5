"""
Two-label models in the magnetization m = m_1 - m_0 in [-1, 1].

With k = K[0][1]:

    V(m)     = k - k sqrt(1 - m^2) - F(m)
    H(m, t)  = k sqrt(1 - m^2) cosh(2t) - k + F(m)
    theta(m) = 1/2 arccosh((k - r1 - F(m)) / (k sqrt(1 - m^2)))
"""

# Python modules
import logging
from dataclasses import dataclass
from typing import Optional

# Third party modules
import numpy as np
from numpy.polynomial import Polynomial as UnivariatePolynomial
from scipy.optimize import brentq, minimize_scalar

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError, InconsistencyError
from apps.modelspec.spec import ModelSpec


logger = logging.getLogger(__name__)

SCAN_POINTS: int = 4096
POLISH_XTOL: float = 1e-12
# theta arguments this far below 1 are rounding; further below means a wrong r1.
CLAMP_TOL: float = 1e-8


@dataclass(frozen=True)
class MinimaResult:
    """r1 = min V and the global minimizers, sorted."""

    r1: float
    minima: tuple[float, ...]
    local_minima: tuple[float, ...]


@dataclass(frozen=True)
class GRepresentation:
    """r1 through max_t (k|t| - G(t)) with G(t) = -F(sign(t) sqrt(1 - t^2))."""

    r1: float
    maximizers: tuple[float, ...]


@dataclass(frozen=True)
class CriticalPoint:
    """Closed-form critical data of the p-body model and its numeric check."""

    p: int
    lambda_c: float
    m_hat: float
    t_set: tuple[float, float]
    lambda_c_check: float
    t_check: float


# ----------------------------------------------
# Model reduction
#
def field_constant(spec: ModelSpec) -> float:
    """k = K[0][1] for a two-label spec."""
    if spec.d != 2:
        raise DomainError(f"Expected two labels, got d={spec.d}")
    return float(spec.kernel[0, 1])


def interaction_in_m(spec: ModelSpec) -> UnivariatePolynomial:
    field_constant(spec)
    return spec.interaction.magnetization_polynomial()


def effective_V(spec: ModelSpec, m: float | np.ndarray) -> float | np.ndarray:
    k: float = field_constant(spec)
    x = np.asarray(m, dtype=float)
    value = k - k * np.sqrt(np.clip(1.0 - x ** 2, 0.0, None)) - interaction_in_m(spec)(x)
    return float(value) if value.ndim == 0 else value


def effective_dV(spec: ModelSpec, m: float | np.ndarray) -> float | np.ndarray:
    k: float = field_constant(spec)
    x = np.asarray(m, dtype=float)
    slope = interaction_in_m(spec).deriv()
    coef = slope.coef
    with np.errstate(divide="ignore", invalid="ignore"):
        if coef.size > 1 and abs(coef[0]) <= 1e-14 * max(1.0, float(np.abs(coef).max())):
            # F'(0) = 0: factor m out so the root at the origin is exact
            value = x * (k / np.sqrt(1.0 - x ** 2) - UnivariatePolynomial(coef[1:])(x))
        else:
            value = k * x / np.sqrt(1.0 - x ** 2) - slope(x)
    return float(value) if value.ndim == 0 else value


def scan_merge_tol(scan_points: int, merge_tol: float) -> float:
    """Merge radius: never finer than four scan cells on [-1, 1]."""
    return max(merge_tol, 4.0 * 2.0 / (scan_points - 1))


def _merge(points: list[tuple[float, float]], tol: float, symmetric: bool = False) -> tuple[float, ...]:
    """
    Cluster (x, value) pairs whose sorted gaps are at most tol; each cluster
    is represented by its lowest value. With symmetric=True a representative
    within tol of 0 is snapped to 0.
    """
    clusters: list[list[tuple[float, float]]] = []
    for x, v in sorted(points):
        if clusters and x - clusters[-1][-1][0] <= tol:
            clusters[-1].append((x, v))
        else:
            clusters.append([(x, v)])
    merged: list[float] = []
    for cluster in clusters:
        x = min(cluster, key=lambda pair: pair[1])[0]
        if symmetric and abs(x) <= tol:
            x = 0.0
        merged.append(float(x))
    return tuple(merged)


def _local_minimizers(f, grid: np.ndarray, values: np.ndarray, polish_df=None) -> list[tuple[float, float]]:
    """Local minima of a scanned function, each polished inside its bracket."""
    out: list[tuple[float, float]] = []
    n: int = grid.size
    for i in range(n):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i < n - 1 else np.inf
        if not (values[i] <= left and values[i] <= right):
            continue
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
        x: Optional[float] = None
        if polish_df is not None and 0 < i < n - 1:
            d_lo, d_hi = polish_df(lo), polish_df(hi)
            if d_lo < 0 < d_hi:
                x = brentq(polish_df, lo, hi, xtol=POLISH_XTOL)
        if x is None:
            result = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": POLISH_XTOL})
            x = float(result.x)
            if f(grid[i]) < f(x):
                x = float(grid[i])
        out.append((float(x), float(f(x))))
    return out


# ----------------------------------------------
# r1 and the minimizer set
#
def r1_and_minima(
    spec: ModelSpec,
    scan_points: int = SCAN_POINTS,
    band: Optional[float] = None,
    merge_tol: Optional[float] = None,
) -> MinimaResult:
    """
    r1 = min V on [-1, 1] and every global minimizer.

    Minimizers are kept when V is within band * (1 + |r1|) of r1, then
    merged when closer than merge_tol or four scan cells, whichever is wider.
    """
    band = settings.MFGS_MULTIWELL_BAND if band is None else band
    merge_tol = settings.MFGS_MERGE_TOL if merge_tol is None else merge_tol
    if field_constant(spec) <= 0:
        raise DomainError("Transverse field must be positive")

    grid = np.linspace(-1.0, 1.0, scan_points)
    values = effective_V(spec, grid)

    def f(x: float) -> float:
        return effective_V(spec, x)

    def df(x: float) -> float:
        return effective_dV(spec, x)

    candidates = _local_minimizers(f, grid, values, polish_df=df)
    r1: float = min(v for _, v in candidates)
    threshold: float = r1 + band * (1.0 + abs(r1))
    tol: float = scan_merge_tol(scan_points, merge_tol)
    symmetric: bool = spec.interaction.is_reflection_symmetric()
    minima = _merge([(x, v) for x, v in candidates if v <= threshold], tol, symmetric)
    local = _merge(candidates, tol, symmetric)
    logger.debug("r1=%.14g with minima %s for %s", r1, minima, spec)
    return MinimaResult(r1=r1, minima=minima, local_minima=local)


def _G_candidates(spec: ModelSpec, scan_points: int) -> tuple[float, list[tuple[float, float]]]:
    """Best value of -(k|t| - G(t)) and the near-optimal (t, value) pairs."""
    k: float = field_constant(spec)
    poly = interaction_in_m(spec)

    def objective(t: float | np.ndarray) -> float | np.ndarray:
        tt = np.asarray(t, dtype=float)
        m = np.sign(tt) * np.sqrt(np.clip(1.0 - tt ** 2, 0.0, None))
        return -(k * np.abs(tt) + poly(m))

    grid = np.linspace(-1.0, 1.0, scan_points)
    values = objective(grid)
    candidates = _local_minimizers(lambda t: float(objective(t)), grid, values)
    best: float = min(v for _, v in candidates)
    band: float = settings.MFGS_MULTIWELL_BAND * (1.0 + abs(best))
    return best, [(t, v) for t, v in candidates if v <= best + band]


def r1_via_G(spec: ModelSpec, scan_points: int = SCAN_POINTS + 1) -> GRepresentation:
    """r1 = k - max_t (k|t| - G(t)); maximizers t are returned sorted."""
    best, near = _G_candidates(spec, scan_points)
    maximizers = _merge(near, scan_merge_tol(scan_points, settings.MFGS_MERGE_TOL))
    return GRepresentation(r1=field_constant(spec) + best, maximizers=maximizers)


def t_maximizers(spec: ModelSpec, scan_points: int = SCAN_POINTS + 1) -> tuple[float, ...]:
    """Positive maximizer set: |t| over the maximizers of k|t| - G(t)."""
    _, near = _G_candidates(spec, scan_points)
    return _merge([(abs(t), v) for t, v in near], scan_merge_tol(scan_points, settings.MFGS_MERGE_TOL))


# ----------------------------------------------
# Momentum and curvature
#
def theta_of_m(spec: ModelSpec, r1: float, m: float | np.ndarray) -> float | np.ndarray:
    """
    Nonnegative root of H(m, theta) = -r1.

    Raises InconsistencyError when r1 lies above V(m) by more than the
    clamp tolerance; m = +-1 gives +inf.
    """
    k: float = field_constant(spec)
    x = np.asarray(m, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Magnetization outside [-1, 1]")
    root = np.sqrt(np.clip(1.0 - x ** 2, 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        argument = (k - r1 - interaction_in_m(spec)(x)) / (k * root)
    if np.any(argument < 1.0 - CLAMP_TOL):
        worst: float = float(np.min(argument))
        raise InconsistencyError("r1 is above V(m)", {"r1": r1, "argument": worst})
    theta = 0.5 * np.arccosh(np.maximum(argument, 1.0))
    return float(theta) if theta.ndim == 0 else theta


def chi0(spec: ModelSpec, m: float | np.ndarray) -> float | np.ndarray:
    """k / (1 - m^2) - sqrt(1 - m^2) F''(m)."""
    k: float = field_constant(spec)
    x = np.asarray(m, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("chi0 needs m inside (-1, 1)")
    second = interaction_in_m(spec).deriv(2)(x)
    value = k / (1.0 - x ** 2) - np.sqrt(1.0 - x ** 2) * second
    return float(value) if value.ndim == 0 else value


def zero_order_correction(spec: ModelSpec, m: float | np.ndarray) -> float | np.ndarray:
    """
    Order-one term c0 of R_N = N r1 + c0 + O(1/N) for a well at m:

        c0 = sqrt(k chi0(m)) - k / sqrt(1 - m^2).
    """
    k: float = field_constant(spec)
    x = np.asarray(m, dtype=float)
    curvature = np.asarray(chi0(spec, x))
    if np.any(curvature < 0):
        raise DomainError("chi0 is negative; m is not a local minimum of V")
    value = np.sqrt(k * curvature) - k / np.sqrt(1.0 - x ** 2)
    return float(value) if value.ndim == 0 else value


# ----------------------------------------------
# p-body criticality
#
def p_body_critical(p: int, grid_points: int = 20001) -> CriticalPoint:
    """
    Critical field of F = m^p with K[0][1] = lambda:

        lambda_c = p/(p-1) (1 - 1/(p-1)^2)^(p/2 - 1),
        m_hat = sqrt(p(p-2)) / (p-1),  t in {1/(p-1), 1}.

    lambda_c is also the maximum over t in [0, 1) of (1+t)(1-t^2)^(p/2-1),
    which is located numerically as a check.
    """
    if int(p) != p or p <= 2:
        raise DomainError(f"p must be an integer above 2, got {p}")
    p = int(p)
    lambda_c: float = p / (p - 1) * (1.0 - 1.0 / (p - 1) ** 2) ** (p / 2 - 1)
    m_hat: float = np.sqrt(p * (p - 2)) / (p - 1)

    def phi(t: float | np.ndarray) -> float | np.ndarray:
        return (1.0 + t) * (1.0 - t ** 2) ** (p / 2 - 1)

    def slope(t: float) -> float:
        return 1.0 / (1.0 + t) - (p - 2) * t / (1.0 - t ** 2)

    grid = np.linspace(0.0, 1.0, grid_points, endpoint=False)
    i = int(np.argmax(phi(grid)))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    t_check: float = brentq(slope, lo, hi, xtol=1e-14) if slope(lo) > 0 > slope(hi) else float(grid[i])
    return CriticalPoint(
        p=p,
        lambda_c=float(lambda_c),
        m_hat=float(m_hat),
        t_set=(1.0 / (p - 1), 1.0),
        lambda_c_check=float(phi(t_check)),
        t_check=float(t_check),
    )
