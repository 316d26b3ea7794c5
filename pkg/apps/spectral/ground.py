"""
Perron-Frobenius ground state of the lumped operator and everything
derived from it: psi_N, Dirichlet eigenvalues, the finite-size fit, the
ground-state (Doob) chain and the semigroup e^{T S_N}.
"""

# Python modules
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

# Third party modules
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import ConvergenceError, DegenerateFitError, DomainError
from apps.modelspec.spec import ModelSpec
from apps.spectral.lumped import LumpedOperator, assemble, restrict


logger = logging.getLogger(__name__)

CHECK_EVERY: int = 64
# Entries below this are treated as underflowed when comparing log h.
TINY: float = 1e-300


@dataclass(frozen=True)
class PerronPair:
    eigenvalue: float
    vector: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True, eq=False)
class GroundStateSolution:
    """Leading eigenpair of S_N; the eigenvalue is -R1."""

    N: int
    R1: float
    h: np.ndarray
    psi_raw: np.ndarray
    psi: np.ndarray
    points: np.ndarray
    iterations: int
    residual: float

    @property
    def eigenvalue(self) -> float:
        return -self.R1

    @property
    def nu(self) -> np.ndarray:
        """Stationary law h^2 of the ground-state chain."""
        return self.h ** 2

    def argmin_psi(self) -> np.ndarray:
        """Count vectors where psi attains its minimum."""
        return self.points[self.psi == 0.0]


@dataclass(frozen=True)
class ExtrapolationResult:
    """Fit R_N = N r1 + c0 + c1 / N."""

    r1: float
    c0: float
    c1: float
    Ns: tuple[int, ...]
    R: tuple[float, ...]


def _perron_pair(
    matrix: sparse.csr_matrix,
    N: int,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
    tail_tol: Optional[float] = None,
) -> PerronPair:
    """
    Shifted power iteration on matrix + s I with s the largest absolute
    row sum, so the iteration matrix is nonnegative with a positive
    diagonal. Stops when the Rayleigh quotient and log of the iterate
    both settle over CHECK_EVERY steps.
    """
    max_iter = settings.MFGS_POWER_MAX_ITER if max_iter is None else max_iter
    tol = settings.MFGS_POWER_TOL if tol is None else tol
    tail_tol = settings.MFGS_POWER_TAIL_TOL if tail_tol is None else tail_tol

    size: int = matrix.shape[0]
    shift: float = float(abs(matrix).sum(axis=1).max())
    iteration = (matrix + shift * sparse.identity(size, format="csr")).tocsr()

    x = np.ones(size)
    rho_prev: float = float(x @ (matrix @ x)) / float(x @ x)
    log_prev = np.zeros(size)
    residual: float = np.inf
    for k in range(1, max_iter + 1):
        y = iteration @ x
        x = y / y.max()
        if k % CHECK_EVERY:
            continue
        mx = matrix @ x
        rho: float = float(x @ mx) / float(x @ x)
        alive = x > TINY
        log_x = np.log(np.where(alive, x, 1.0))
        tail: float = float(np.max(np.abs(log_x - log_prev)[alive])) if alive.any() else 0.0
        residual = float(np.max(np.abs(mx - rho * x)))
        if abs(rho - rho_prev) < tol * N and tail < tail_tol:
            logger.debug("Power iteration converged after %d steps (rho=%.12g)", k, rho)
            return PerronPair(rho, x / np.linalg.norm(x), k, residual)
        rho_prev, log_prev = rho, log_x
    raise ConvergenceError("Power iteration did not converge", max_iter, residual)


def ground_state(op: LumpedOperator, max_iter: Optional[int] = None, tol: Optional[float] = None) -> GroundStateSolution:
    """Perron pair of S_N with h > 0, ||h||_2 = 1 and psi = -log(h)/N."""
    pair = _perron_pair(op.matrix, op.N, max_iter=max_iter, tol=tol)
    h = pair.vector
    with np.errstate(divide="ignore"):
        psi_raw = -np.log(h) / op.N
    psi = psi_raw - psi_raw.min()
    return GroundStateSolution(
        N=op.N,
        R1=-pair.eigenvalue,
        h=h,
        psi_raw=psi_raw,
        psi=psi,
        points=op.points,
        iterations=pair.iterations,
        residual=pair.residual,
    )


def magnetization_mask(op: LumpedOperator, interval: tuple[float, float]) -> np.ndarray:
    if op.spec.d != 2:
        raise DomainError("Dirichlet intervals are defined for two labels only")
    lo, hi = interval
    if not -1.0 <= lo <= hi <= 1.0:
        raise DomainError(f"Interval {interval} is not inside [-1, 1]")
    points = op.points
    magnetization = (points[:, 1] - points[:, 0]) / float(op.N)
    return (magnetization >= lo) & (magnetization <= hi)


def dirichlet_eigenvalue(op: LumpedOperator, interval: tuple[float, float]) -> float:
    """Leading eigenvalue -R_{N,l} of S_N restricted to an interval of magnetization."""
    mask = magnetization_mask(op, interval)
    if not mask.any():
        raise DomainError(f"No grid point inside {interval}", {"N": op.N})
    sub = restrict(op, mask)
    return _perron_pair(sub.matrix, op.N).eigenvalue


def dirichlet_correction(op: LumpedOperator, interval: tuple[float, float], r1: float) -> float:
    """R_{N,l} - N r1."""
    return -dirichlet_eigenvalue(op, interval) - op.N * r1


def correction_extrapolation(spec: ModelSpec, Ns: Sequence[int]) -> ExtrapolationResult:
    """Least-squares fit of R_N = N r1 + c0 + c1/N over several N."""
    sizes = tuple(int(n) for n in Ns)
    if len(set(sizes)) < 3:
        raise DegenerateFitError("Need at least three distinct values of N", {"Ns": sizes})
    energies = tuple(ground_state(assemble(spec, n)).R1 for n in sizes)
    n = np.asarray(sizes, dtype=float)
    design = np.column_stack([n, np.ones_like(n), 1.0 / n])
    coef, _, rank, _ = np.linalg.lstsq(design, np.asarray(energies), rcond=None)
    if rank < 3:
        raise DegenerateFitError("Extrapolation system is rank deficient", {"rank": int(rank)})
    logger.info("Extrapolated %s over N=%s: r1=%.10g c0=%.6g", spec, sizes, coef[0], coef[1])
    return ExtrapolationResult(
        r1=float(coef[0]), c0=float(coef[1]), c1=float(coef[2]), Ns=sizes, R=energies
    )


def doob_generator(op: LumpedOperator, gs: GroundStateSolution) -> LumpedOperator:
    """Ground-state chain with rates r(m -> m') h(m') / h(m); reversible for h^2."""
    h = gs.h
    if h.shape[0] != len(op):
        raise DomainError("Ground state does not match the operator")
    scale = sparse.diags(1.0 / h)
    tilted = (scale @ op.rates @ sparse.diags(h)).tocsr()
    out = np.asarray(tilted.sum(axis=1)).ravel()
    matrix = (tilted - sparse.diags(out)).tocsr()
    return LumpedOperator(
        spec=op.spec, grid=op.grid, matrix=matrix, diag=-out, rates=tilted, indices=op.indices
    )


def semigroup_apply(op: LumpedOperator, v: np.ndarray, T: float) -> np.ndarray:
    """e^{T S_N} v."""
    if T < 0:
        raise DomainError(f"Time must be nonnegative, got {T}")
    vector = np.asarray(v, dtype=float)
    if T == 0:
        return vector.copy()
    return expm_multiply(op.matrix.tocsc() * T, vector)


def spectrum_header(d: int) -> list[str]:
    return (
        ["index"]
        + [f"count_{a}" for a in range(d)]
        + [f"m_{a}" for a in range(d)]
        + ["h", "psi"]
    )


def spectrum_rows(gs: GroundStateSolution) -> list[list[float | int]]:
    """One row per grid point: index, counts, coordinates, h, psi."""
    coords = gs.points / float(gs.N)
    rows: list[list[float | int]] = []
    for i, (counts, m, h, psi) in enumerate(zip(gs.points, coords, gs.h, gs.psi)):
        rows.append([i, *(int(c) for c in counts), *(float(x) for x in m), float(h), float(psi)])
    return rows
