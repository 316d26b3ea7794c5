"""
Dense exact diagonalization on the full d^N Hilbert space.

Only for tiny systems; used to check the lumped reduction.
"""

# Python modules
import logging
from dataclasses import dataclass
from typing import Optional

# Third party modules
import numpy as np
from scipy import sparse
from scipy.linalg import eigh

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import SizeCapError
from apps.modelspec.spec import ModelSpec
from apps.simplex.grid import SimplexGrid, enumerate_grid, log_multinomial


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OracleResult:
    """
    E1 is the ground energy of H_N, where -H_N = N F(M) + sum_i B_i.
    shifted_energy is the ground energy of H_N + sum_i kappa(sigma_i);
    it equals R1 of the lumped operator for every kernel.
    """

    N: int
    E1: float
    shifted_energy: float
    ground: np.ndarray
    lumped_h: np.ndarray
    grid: SimplexGrid
    kappa_regular: Optional[float]

    @property
    def regular_R1(self) -> Optional[float]:
        """N kappa + E1 when every row of K has the same sum kappa."""
        if self.kappa_regular is None:
            return None
        return self.N * self.kappa_regular + self.E1


def _site_counts(d: int, N: int) -> np.ndarray:
    """counts[j, a] = number of sites with label a in basis state j."""
    digits = np.stack(np.unravel_index(np.arange(d ** N), (d,) * N))
    return np.stack([(digits == a).sum(axis=0) for a in range(d)], axis=1)


def _transverse_part(kernel: np.ndarray, N: int) -> sparse.csr_matrix:
    d: int = kernel.shape[0]
    single = sparse.csr_matrix(kernel)
    total = sparse.csr_matrix((d ** N, d ** N))
    for site in range(N):
        left = sparse.identity(d ** site, format="csr")
        right = sparse.identity(d ** (N - site - 1), format="csr")
        total = total + sparse.kron(sparse.kron(left, single, "csr"), right, "csr")
    return total


def full_hamiltonian_oracle(spec: ModelSpec, N: int, cap: Optional[int] = None) -> OracleResult:
    """Diagonalize -H_N densely and project its ground state onto the symmetric basis."""
    cap = settings.MFGS_ORACLE_CAP if cap is None else cap
    spec.require_valid()
    dim: int = spec.d ** N
    if dim > cap:
        raise SizeCapError("Full Hilbert space", dim, cap)

    counts = _site_counts(spec.d, N)
    field = N * np.asarray(spec.interaction(counts / float(N)), dtype=float)
    minus_h = _transverse_part(spec.kernel, N).toarray()
    minus_h[np.diag_indices(dim)] += field

    top = eigh(minus_h, eigvals_only=True, subset_by_index=[dim - 1, dim - 1])
    shifted = minus_h.copy()
    shifted[np.diag_indices(dim)] -= counts @ spec.rates.kappa_alpha
    values, vectors = eigh(shifted, subset_by_index=[dim - 1, dim - 1])

    ground = vectors[:, 0]
    if ground.sum() < 0:
        ground = -ground

    grid = enumerate_grid(N, spec.d)
    ranks = grid.index_of(counts)
    multiplicity = np.exp(log_multinomial(grid, grid.points))
    lumped = np.bincount(ranks, weights=ground, minlength=len(grid)) / np.sqrt(multiplicity)
    lumped /= np.linalg.norm(lumped)

    logger.debug("Oracle for %s at N=%d: E1=%.12g", spec, N, -top[0])
    return OracleResult(
        N=N,
        E1=-float(top[0]),
        shifted_energy=-float(values[0]),
        ground=ground,
        lumped_h=lumped,
        grid=grid,
        kappa_regular=spec.rates.kappa_regular,
    )
