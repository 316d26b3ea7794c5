"""
Scalar fields on the simplex: V, Xi_N, F_g, H0 and H.

Functions accept one point (shape (d,)) or a stack (shape (..., d))
and broadcast over the leading axes.
"""

# Python modules
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

# Third party modules
import numpy as np

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec, check_simplex_point
from apps.simplex.grid import all_moves, log_mu_at


@dataclass(frozen=True)
class CotangentPoint:
    """(m, theta); theta is defined up to adding a multiple of the ones vector."""

    m: np.ndarray
    theta: np.ndarray

    def normalized(self) -> "CotangentPoint":
        """Representative with the last momentum set to zero."""
        return CotangentPoint(self.m, self.theta - self.theta[..., -1:])


@dataclass(frozen=True)
class TangentVector:
    """Velocity with zero total: (v, 1) = 0."""

    v: np.ndarray

    def __post_init__(self) -> None:
        if abs(float(np.sum(self.v))) > settings.MFGS_SIMPLEX_TOL:
            raise DomainError("Velocity does not sum to zero", {"sum": float(np.sum(self.v))})


def interaction_values(spec: ModelSpec, m: np.ndarray) -> np.ndarray | float:
    """F on an array of any leading shape."""
    points = np.asarray(m, dtype=float)
    if points.ndim == 1:
        return spec.interaction(points)
    flat = spec.interaction(points.reshape(-1, spec.d))
    return np.asarray(flat).reshape(points.shape[:-1])


def pair_weights(spec: ModelSpec, m: np.ndarray) -> np.ndarray:
    """a[..., alpha, beta] = sqrt(m_alpha m_beta) K[alpha][beta]."""
    root = np.sqrt(np.clip(np.asarray(m, dtype=float), 0.0, None))
    return root[..., :, None] * root[..., None, :] * spec.kernel


def lambda_alpha(spec: ModelSpec, m: np.ndarray) -> np.ndarray:
    """lambda_alpha(m) = sum_beta sqrt(m_alpha m_beta) K[alpha][beta]."""
    return pair_weights(spec, m).sum(axis=-1)


def V(spec: ModelSpec, m: np.ndarray | Sequence[float]) -> np.ndarray | float:
    """Effective potential 1/2 sum K (sqrt m_b - sqrt m_a)^2 - F(m)."""
    point = check_simplex_point(m, spec.d)
    root = np.sqrt(np.clip(point, 0.0, None))
    diff = root[..., None, :] - root[..., :, None]
    surface = 0.5 * np.sum(spec.kernel * diff ** 2, axis=(-2, -1))
    result = surface - interaction_values(spec, point)
    return float(result) if np.ndim(result) == 0 else result


def xi_N(spec: ModelSpec, N: int, m: np.ndarray | Sequence[float]) -> np.ndarray | float:
    """Finite-N correction sum K sqrt(m_a) (sqrt(m_b + 1/N) - sqrt(m_b))."""
    point = check_simplex_point(m, spec.d)
    root = np.sqrt(np.clip(point, 0.0, None))
    shifted = np.sqrt(np.clip(point, 0.0, None) + 1.0 / N)
    result = np.sum(spec.kernel * root[..., :, None] * (shifted - root)[..., None, :], axis=(-2, -1))
    return float(result) if np.ndim(result) == 0 else result


def F_g_default(spec: ModelSpec, N: int, m: np.ndarray | Sequence[float]) -> np.ndarray | float:
    """F_g for g = 1/sqrt(mu_N), i.e. -V + Xi_N."""
    return xi_N(spec, N, m) - V(spec, m)


def F_g(
    spec: ModelSpec,
    N: int,
    counts: Sequence[int],
    g: Optional[Callable[[tuple[int, ...]], float]] = None,
) -> float:
    """
    Girsanov-tilted potential at the grid point `counts`:

        sum K[a][b] m_a (g(m + (e_b - e_a)/N) / g(m) - 1) + F(m).

    g defaults to 1/sqrt(mu_N).
    """
    point = tuple(int(c) for c in counts)
    if len(point) != spec.d or sum(point) != N or min(point) < 0:
        raise DomainError(f"{point} is not a grid point for N={N}")
    if g is None:
        def g(target: tuple[int, ...]) -> float:
            return float(np.exp(-0.5 * log_mu_at(N, spec.d, target)))

    base: float = g(point)
    if not base > 0:
        raise DomainError("g must be strictly positive", {"point": point})

    total: float = 0.0
    for move in all_moves(spec.d):
        rate: float = spec.kernel[move.from_label, move.to_label]
        if rate == 0.0 or point[move.from_label] == 0:
            continue
        target = move.apply(point)
        value: float = g(target)
        if not value > 0:
            raise DomainError("g must be strictly positive", {"point": target})
        total += rate * point[move.from_label] / N * (value / base - 1.0)
    return total + float(spec.interaction(np.asarray(point, dtype=float) / N))


def H0(spec: ModelSpec, m: np.ndarray, theta: np.ndarray) -> np.ndarray | float:
    """sum sqrt(m_a m_b) K (cosh(theta_b - theta_a) - 1)."""
    weights = pair_weights(spec, m)
    th = np.asarray(theta, dtype=float)
    result = hamiltonian_from_weights(weights, th)
    return float(result) if np.ndim(result) == 0 else result


def H(spec: ModelSpec, m: np.ndarray, theta: np.ndarray) -> np.ndarray | float:
    return H0(spec, m, theta) - V(spec, m)


def hamiltonian_from_weights(weights: np.ndarray, theta: np.ndarray) -> np.ndarray:
    diff = theta[..., None, :] - theta[..., :, None]
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.where(weights > 0, weights * (np.cosh(diff) - 1.0), 0.0)
    return terms.sum(axis=(-2, -1))


def grad_H0(weights: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """d H0 / d theta_g = 2 sum_b a_gb sinh(theta_g - theta_b)."""
    diff = theta[..., :, None] - theta[..., None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.where(weights > 0, weights * np.sinh(diff), 0.0)
    return 2.0 * terms.sum(axis=-1)


def hess_H0(weights: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Weighted graph Laplacian with edge weights 2 a cosh(theta_g - theta_d)."""
    diff = theta[..., :, None] - theta[..., None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        edge = np.where(weights > 0, 2.0 * weights * np.cosh(diff), 0.0)
    hess = -edge
    d: int = weights.shape[-1]
    idx = np.arange(d)
    hess[..., idx, idx] = edge.sum(axis=-1) - edge[..., idx, idx]
    return hess
