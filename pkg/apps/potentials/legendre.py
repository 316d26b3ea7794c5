"""
Legendre transform of H0 in the momentum:

    L0(m, v) = sup_theta {(v, theta) - H0(m, theta)}.

The sup is a strictly concave problem on the quotient by the ones
vector; it is solved by a damped Newton iteration in the d-1 reduced
coordinates (last momentum pinned to zero), batched over many (m, v).
"""

# Python modules
import logging
from dataclasses import dataclass
from typing import Optional

# Third party modules
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.constants import INFINITE_COST
from apps.abstracts.exceptions import ConvergenceError, DomainError
from apps.modelspec.spec import ModelSpec, check_simplex_point
from apps.potentials.fields import (
    V,
    grad_H0,
    hamiltonian_from_weights,
    hess_H0,
    pair_weights,
)


logger = logging.getLogger(__name__)

# Iterates beyond this norm mean the sup is +inf (mass pushed out of an empty label).
DIVERGENCE_NORM: float = 50.0
MAX_HALVINGS: int = 60


@dataclass(frozen=True)
class LegendreBatch:
    """Values and maximizers of a batched Legendre problem."""

    values: np.ndarray
    thetas: np.ndarray
    iterations: int


def _objective(weights: np.ndarray, v: np.ndarray, theta: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return np.einsum("...i,...i->...", v, theta) - hamiltonian_from_weights(weights, theta)


def _off_subspace(v: np.ndarray) -> np.ndarray:
    scale = np.maximum(1.0, np.max(np.abs(v), axis=-1))
    return np.abs(v.sum(axis=-1)) > settings.MFGS_SIMPLEX_TOL * scale


def _blocked_by_components(weights: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    True where some connected component of the graph {a > 0} carries
    nonzero net velocity; only points with an empty label can be split.
    """
    blocked = np.zeros(weights.shape[0], dtype=bool)
    has_gap = np.any(weights.sum(axis=-1) == 0, axis=-1)
    for i in np.flatnonzero(has_gap):
        n_comp, labels = connected_components(csr_matrix(weights[i] > 0), directed=False)
        net = np.bincount(labels, weights=v[i], minlength=n_comp)
        scale: float = max(1.0, float(np.max(np.abs(v[i]))))
        blocked[i] = bool(np.any(np.abs(net) > settings.MFGS_SIMPLEX_TOL * scale))
    return blocked


def legendre_batch(
    weights: np.ndarray,
    v: np.ndarray,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> LegendreBatch:
    """
    Solve sup_theta (v, theta) - H0 for stacks weights (n, d, d), v (n, d).

    Rows whose sup is infinite get INFINITE_COST and a NaN maximizer.
    """
    max_iter = settings.MFGS_NEWTON_MAX_ITER if max_iter is None else max_iter
    tol = settings.MFGS_NEWTON_TOL if tol is None else tol

    weights = np.asarray(weights, dtype=float)
    v = np.asarray(v, dtype=float)
    n, d = v.shape
    values = np.zeros(n)
    theta = np.zeros((n, d))

    infinite = _off_subspace(v) | _blocked_by_components(weights, v)
    trivial = np.all(v == 0.0, axis=-1) & ~infinite
    active = ~(infinite | trivial)
    scale = np.maximum(1.0, np.max(np.abs(v), axis=-1))

    iterations: int = 0
    for iterations in range(1, max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        a, vv, th = weights[idx], v[idx], theta[idx]

        gradient = vv - grad_H0(a, th)
        reduced = gradient[:, :-1]
        converged = np.max(np.abs(reduced), axis=-1) <= tol * scale[idx]
        active[idx[converged]] = False
        keep = ~converged
        if not np.any(keep):
            break
        idx, a, vv, th, reduced = idx[keep], a[keep], vv[keep], th[keep], reduced[keep]

        hessian = hess_H0(a, th)[:, :-1, :-1]
        step = np.einsum("nij,nj->ni", np.linalg.pinv(hessian, rcond=1e-13), reduced)
        step = np.concatenate([step, np.zeros((step.shape[0], 1))], axis=1)

        current = _objective(a, vv, th)
        t = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        trial = th.copy()
        for _ in range(MAX_HALVINGS):
            pending = ~accepted
            if not np.any(pending):
                break
            candidate = th[pending] + t[pending, None] * step[pending]
            gain = _objective(a[pending], vv[pending], candidate)
            ok = gain >= current[pending] - 1e-14 * (1.0 + np.abs(current[pending]))
            rows = np.flatnonzero(pending)
            trial[rows[ok]] = candidate[ok]
            accepted[rows[ok]] = True
            t[rows[~ok]] *= 0.5
        theta[idx] = trial

        diverged = np.max(np.abs(trial), axis=-1) > DIVERGENCE_NORM
        infinite[idx[diverged]] = True
        active[idx[diverged]] = False
    else:
        if np.any(active):
            idx = np.flatnonzero(active)
            residual = float(np.max(np.abs((v[idx] - grad_H0(weights[idx], theta[idx]))[:, :-1])))
            raise ConvergenceError("Legendre Newton iteration did not converge", max_iter, residual)

    finite = ~infinite
    values[finite] = np.maximum(_objective(weights[finite], v[finite], theta[finite]), 0.0)
    values[infinite] = INFINITE_COST
    theta[infinite] = np.nan
    if np.any(infinite):
        logger.debug("%d of %d Legendre problems are infinite", int(infinite.sum()), n)
    return LegendreBatch(values=values, thetas=theta, iterations=iterations)


def _stack(spec: ModelSpec, m: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    point = check_simplex_point(m, spec.d)
    velocity = np.asarray(v, dtype=float)
    single: bool = point.ndim == 1 and velocity.ndim == 1
    point, velocity = np.broadcast_arrays(np.atleast_2d(point), np.atleast_2d(velocity))
    return point, velocity, single


def L0_numeric(
    spec: ModelSpec,
    m: np.ndarray,
    v: np.ndarray,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> np.ndarray | float:
    """Numeric Legendre transform; INFINITE_COST off the zero-sum subspace."""
    point, velocity, single = _stack(spec, m, v)
    batch = legendre_batch(pair_weights(spec, point), velocity, max_iter, tol)
    return float(batch.values[0]) if single else batch.values


def L0_argmax(spec: ModelSpec, m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Maximizing momentum, normalized so its last entry is zero."""
    point, velocity, single = _stack(spec, m, v)
    batch = legendre_batch(pair_weights(spec, point), velocity)
    return batch.thetas[0] if single else batch.thetas


def L0_closed_d2(spec: ModelSpec, m: float | np.ndarray, v: float | np.ndarray) -> float | np.ndarray:
    """
    Closed form for two labels in the magnetization coordinate:

        a = K01 sqrt(1 - m^2),
        L0 = (v/2) asinh(v / 2a) - sqrt((v/2)^2 + a^2) + a.
    """
    if spec.d != 2:
        raise DomainError("Closed form exists for two labels only")
    mm = np.asarray(m, dtype=float)
    vv = np.asarray(v, dtype=float)
    if np.any(np.abs(mm) > 1.0 + settings.MFGS_SIMPLEX_TOL):
        raise DomainError("Magnetization outside [-1, 1]")
    a = spec.kernel[0, 1] * np.sqrt(np.clip(1.0 - mm ** 2, 0.0, None))
    a, vv = np.broadcast_arrays(a, vv)
    out = np.empty(a.shape)
    regular = a > 0
    half = 0.5 * vv[regular]
    ar = a[regular]
    out[regular] = half * np.arcsinh(half / ar) - np.hypot(half, ar) + ar
    out[~regular] = np.where(vv[~regular] == 0.0, 0.0, INFINITE_COST)
    return float(out) if out.ndim == 0 else out


def L(spec: ModelSpec, m: np.ndarray, v: np.ndarray) -> np.ndarray | float:
    """Lagrangian L0 + V."""
    return L0_numeric(spec, m, v) + V(spec, m)


def H0_biconjugate(
    spec: ModelSpec,
    m: np.ndarray,
    theta: np.ndarray,
    max_iter: int = 50,
    tol: float = 1e-12,
) -> float:
    """
    sup_v {(v, theta) - L0(m, v)} by Newton in v.

    The gradient in v is theta - theta*(v), theta* the Legendre maximizer,
    and the Newton step is Hess H0(theta*) (theta - theta*).
    """
    point = check_simplex_point(m, spec.d)
    target = np.asarray(theta, dtype=float)
    target = target - target[-1]
    weights = pair_weights(spec, point)[None]

    def evaluate(velocity: np.ndarray) -> tuple[float, np.ndarray]:
        batch = legendre_batch(weights, velocity[None])
        return float(velocity @ target - batch.values[0]), batch.thetas[0]

    velocity = np.zeros(spec.d)
    best, maximizer = evaluate(velocity)
    for _ in range(max_iter):
        residual = target - maximizer
        if np.max(np.abs(residual)) <= tol:
            break
        hessian = hess_H0(weights[0], maximizer)
        step = hessian @ residual
        step -= step.mean()
        t: float = 1.0
        for _ in range(MAX_HALVINGS):
            trial_value, trial_max = evaluate(velocity + t * step)
            if trial_value >= best - 1e-15 * (1.0 + abs(best)):
                velocity, best, maximizer = velocity + t * step, trial_value, trial_max
                break
            t *= 0.5
        else:
            break
    return best
