"""
The discrete simplex: all count vectors of d nonnegative integers summing to N.

Points are stored as integer counts (never floats) in lexicographic
order; `index_of` is the matching combinatorial rank.
"""

# Python modules
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from math import comb
from typing import Optional, Sequence

# Third party modules
import numpy as np
from scipy.special import gammaln, logsumexp

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError, SizeCapError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Move:
    """One particle changes label from_label -> to_label."""

    from_label: int
    to_label: int
    d: int

    def __post_init__(self) -> None:
        if self.from_label == self.to_label:
            raise ValueError("A move must change the label")

    @property
    def displacement(self) -> np.ndarray:
        delta = np.zeros(self.d, dtype=np.int64)
        delta[self.from_label] -= 1
        delta[self.to_label] += 1
        return delta

    def apply(self, counts: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(c) for c in np.asarray(counts, dtype=np.int64) + self.displacement)


def all_moves(d: int) -> tuple[Move, ...]:
    """Ordered (alpha, beta) pairs, alpha != beta, in lexicographic order."""
    return tuple(Move(a, b, d) for a, b in permutations(range(d), 2))


def grid_size(N: int, d: int) -> int:
    return comb(N + d - 1, d - 1)


@dataclass(frozen=True, eq=False)
class SimplexGrid:
    N: int
    d: int
    points: np.ndarray

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @cached_property
    def _binomials(self) -> np.ndarray:
        # table[n, k] = C(n, k) for n <= N + d, k <= d
        table = np.zeros((self.N + self.d + 1, self.d + 1), dtype=np.int64)
        for n in range(self.N + self.d + 1):
            for k in range(min(n, self.d) + 1):
                table[n, k] = comb(n, k)
        return table

    def index_of(self, counts: np.ndarray | Sequence[int]) -> np.ndarray | int:
        """Lexicographic rank of one count vector or a stack of them."""
        arr = np.asarray(counts, dtype=np.int64)
        single: bool = arr.ndim == 1
        arr = np.atleast_2d(arr)
        if np.any(arr < 0) or np.any(arr.sum(axis=1) != self.N):
            raise DomainError("Counts are not a point of the grid", {"N": self.N})
        rank = np.zeros(arr.shape[0], dtype=np.int64)
        remaining = np.full(arr.shape[0], self.N, dtype=np.int64)
        table = self._binomials
        for i in range(self.d - 1):
            k: int = self.d - 1 - i
            rank += table[remaining + k, k] - table[remaining - arr[:, i] + k, k]
            remaining -= arr[:, i]
        return int(rank[0]) if single else rank

    def contains(self, counts: Sequence[int]) -> bool:
        arr = np.asarray(counts)
        return bool(arr.shape == (self.d,) and np.all(arr >= 0) and arr.sum() == self.N)

    def coords(self) -> np.ndarray:
        """Real coordinates m = counts / N."""
        return self.points / float(self.N)

    def magnetization(self) -> np.ndarray:
        """m_1 - m_0 for two labels."""
        if self.d != 2:
            raise DomainError("Magnetization is defined for two labels only")
        return (self.points[:, 1] - self.points[:, 0]) / float(self.N)

    def interior_mask(self) -> np.ndarray:
        return np.all(self.points >= 1, axis=1)

    @cached_property
    def moves(self) -> tuple[Move, ...]:
        return all_moves(self.d)

    @cached_property
    def _neighbor_table(self) -> np.ndarray:
        table = np.full((len(self), len(self.moves)), -1, dtype=np.int64)
        for k, move in enumerate(self.moves):
            ok = self.points[:, move.from_label] >= 1
            table[ok, k] = self.index_of(self.points[ok] + move.displacement)
        table.setflags(write=False)
        return table

    def neighbor_table(self) -> np.ndarray:
        """table[i, k] = index reached from point i by move k, or -1."""
        return self._neighbor_table


def enumerate_grid(N: int, d: int, cap: Optional[int] = None) -> SimplexGrid:
    """All count vectors of length d summing to N, lexicographically sorted."""
    if N < 1 or d < 2:
        raise DomainError(f"Need N >= 1 and d >= 2, got N={N}, d={d}")
    cap = settings.MFGS_SIMPLEX_CAP if cap is None else cap
    size: int = grid_size(N, d)
    if size > cap:
        raise SizeCapError("Simplex grid", size, cap)

    # stars and bars: bar positions in lexicographic order give counts in lexicographic order
    bars = np.fromiter(
        (b for combo in combinations(range(N + d - 1), d - 1) for b in combo),
        dtype=np.int64,
        count=size * (d - 1),
    ).reshape(size, d - 1)
    padded = np.hstack([np.full((size, 1), -1), bars, np.full((size, 1), N + d - 1)])
    points = np.diff(padded, axis=1) - 1
    points.setflags(write=False)
    logger.debug("Enumerated %d points for N=%d, d=%d", size, N, d)
    return SimplexGrid(N=N, d=d, points=points)


def log_multinomial(grid: SimplexGrid, m: Sequence[int] | np.ndarray) -> float | np.ndarray:
    """log(N! / prod_alpha (N m_alpha)!) via log-gamma."""
    counts = np.asarray(m, dtype=float)
    return gammaln(grid.N + 1.0) - gammaln(counts + 1.0).sum(axis=-1)


def log_mu(grid: SimplexGrid, m: Optional[Sequence[int] | np.ndarray] = None) -> float | np.ndarray:
    """log of the multinomial law mu_N(m) = c_N(m) / d^N (all points when m is None)."""
    counts = grid.points if m is None else m
    return log_mu_at(grid.N, grid.d, counts)


def log_mu_at(N: int, d: int, counts: Sequence[int] | np.ndarray) -> float | np.ndarray:
    arr = np.asarray(counts, dtype=float)
    return gammaln(N + 1.0) - gammaln(arr + 1.0).sum(axis=-1) - N * np.log(d)


def total_log_mass(grid: SimplexGrid) -> float:
    """log sum_m mu_N(m); zero up to rounding."""
    return float(logsumexp(log_mu(grid)))


def neighbors(grid: SimplexGrid, m: Sequence[int]) -> list[tuple[Move, tuple[int, ...]]]:
    """Every move available at m (label with count >= 1), independent of the kernel."""
    if not grid.contains(m):
        raise DomainError(f"{tuple(m)} is not a point of the grid")
    return [(move, move.apply(m)) for move in grid.moves if m[move.from_label] >= 1]


def graph_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Number of single moves between count vectors (half the l1 distance)."""
    return np.abs(np.asarray(a) - np.asarray(b)).sum(axis=-1) // 2
