"""
The lumped operator S_N on the discrete simplex.

Off-diagonal rate for the move m -> m + (e_b - e_a)/N is
sqrt(c_a (c_b + 1)) K[a][b] in counts c = N m; it is symmetric under
the reverse move. The diagonal is N F(m) - sum_a kappa_a c_a, which is
N F_g(m) minus the outgoing rates for g = 1/sqrt(mu_N).
"""

# Python modules
import logging
from dataclasses import dataclass
from typing import Optional

# Third party modules
import numpy as np
from scipy import sparse

# Project modules
from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec
from apps.simplex.grid import SimplexGrid, enumerate_grid


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LumpedOperator:
    """
    Sparse symmetric matrix over (a subset of) the grid.

    `indices` are the grid ranks of the rows; None means the whole grid.
    """

    spec: ModelSpec
    grid: SimplexGrid
    matrix: sparse.csr_matrix
    diag: np.ndarray
    rates: sparse.csr_matrix
    indices: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.diag.shape[0])

    @property
    def N(self) -> int:
        return self.grid.N

    @property
    def points(self) -> np.ndarray:
        """Count vectors of the rows."""
        return self.grid.points if self.indices is None else self.grid.points[self.indices]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def row(self, i: int) -> dict[int, float]:
        """Off-diagonal entries of row i as {column: rate}."""
        start, stop = self.rates.indptr[i], self.rates.indptr[i + 1]
        return {int(j): float(r) for j, r in zip(self.rates.indices[start:stop], self.rates.data[start:stop])}

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _move_rates(spec: ModelSpec, grid: SimplexGrid) -> sparse.csr_matrix:
    table = grid.neighbor_table()
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for k, move in enumerate(grid.moves):
        strength: float = float(spec.kernel[move.from_label, move.to_label])
        if strength == 0.0:
            continue
        source = np.flatnonzero(table[:, k] >= 0)
        counts = grid.points[source]
        product = counts[:, move.from_label] * (counts[:, move.to_label] + 1)
        rows.append(source)
        cols.append(table[source, k])
        data.append(np.sqrt(product.astype(float)) * strength)
    size: int = len(grid)
    if not rows:
        return sparse.csr_matrix((size, size))
    return sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )


def assemble(spec: ModelSpec, N: int, cap: Optional[int] = None) -> LumpedOperator:
    """Build S_N for a valid spec."""
    spec.require_valid()
    grid = enumerate_grid(N, spec.d, cap)
    rates = _move_rates(spec, grid)

    asymmetry = abs(rates - rates.T)
    if asymmetry.nnz and asymmetry.max() != 0.0:
        raise DomainError("Assembled rates are not symmetric", {"max": float(asymmetry.max())})

    kappa = spec.rates.kappa_alpha
    field = np.asarray(spec.interaction(grid.coords()), dtype=float)
    diag = N * field - grid.points @ kappa
    matrix = (rates + sparse.diags(diag)).tocsr()
    logger.debug("Assembled S_N for %s: N=%d, %d rows, %d rates", spec, N, len(grid), rates.nnz)
    return LumpedOperator(spec=spec, grid=grid, matrix=matrix, diag=diag, rates=rates)


def restrict(op: LumpedOperator, mask: np.ndarray) -> LumpedOperator:
    """Dirichlet restriction: keep the rows and columns where mask is True."""
    keep = np.flatnonzero(np.asarray(mask, dtype=bool))
    if keep.size == 0:
        raise DomainError("Restriction is empty")
    base = np.arange(len(op)) if op.indices is None else op.indices
    return LumpedOperator(
        spec=op.spec,
        grid=op.grid,
        matrix=op.matrix[keep][:, keep].tocsr(),
        diag=op.diag[keep],
        rates=op.rates[keep][:, keep].tocsr(),
        indices=base[keep],
    )
