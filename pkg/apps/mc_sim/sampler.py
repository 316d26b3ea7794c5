"""
Continuous-time simulation of the lumped chain.

    <m1| e^{T S_N} |m0> = E_m0[ exp(int_0^T N F_g(m(t)) dt) 1{m(T) = m1} ]

where the chain jumps with the off-diagonal rates of S_N and N F_g is
its diagonal plus the exit rate. Paths run in vectorized chunks; chunk c
draws from a Philox stream keyed by (seed, c), so results do not depend
on the number of worker threads.
"""

# Python modules
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

# Third party modules
import numpy as np
from scipy import sparse
from scipy.special import logsumexp

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec
from apps.simplex.grid import log_mu
from apps.spectral.ground import GroundStateSolution, doob_generator
from apps.spectral.lumped import LumpedOperator, assemble


logger = logging.getLogger(__name__)

Dynamics = Literal["default", "uniform"]
DYNAMICS: tuple[str, ...] = ("default", "uniform")
MIN_PATHS: int = 100
SEED_LIMIT: int = 2 ** 64
# exp overflows a float near 709.78
OVERFLOW_LOG: float = 700.0


def check_seed(seed: int) -> int:
    if not 0 <= seed < SEED_LIMIT:
        raise DomainError(f"Seed must be a 64-bit unsigned value, got {seed}")
    return seed


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for one chunk of paths."""
    check_seed(seed)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


# ----------------------------------------------
# Chain
#
@dataclass(frozen=True, eq=False)
class JumpChain:
    """
    Jump rates padded to one row per state, plus a potential.

    targets[i, k] is the k-th destination of state i (-1 for padding) and
    cumulative[i, k] the running sum of its rates.
    """

    op: LumpedOperator
    targets: np.ndarray
    cumulative: np.ndarray
    exit_rate: np.ndarray
    potential: np.ndarray
    lengths: np.ndarray

    @classmethod
    def from_rates(cls, op: LumpedOperator, rates: sparse.csr_matrix, potential: np.ndarray) -> "JumpChain":
        rates = rates.tocsr()
        rates.sort_indices()
        n: int = rates.shape[0]
        width: int = int(np.diff(rates.indptr).max()) if n else 0
        targets = np.full((n, width), -1, dtype=np.int64)
        cumulative = np.full((n, width), np.inf)
        for i in range(n):
            start, stop = rates.indptr[i], rates.indptr[i + 1]
            targets[i, : stop - start] = rates.indices[start:stop]
            cumulative[i, : stop - start] = np.cumsum(rates.data[start:stop])
        exit_rate = np.asarray(rates.sum(axis=1)).ravel()
        return cls(
            op=op,
            targets=targets,
            cumulative=cumulative,
            exit_rate=exit_rate,
            potential=potential,
            lengths=np.diff(rates.indptr),
        )

    def __len__(self) -> int:
        return int(self.exit_rate.shape[0])

    def next_states(self, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Destinations of one jump from each state."""
        u = rng.random(states.size) * self.exit_rate[states]
        column = (self.cumulative[states] <= u[:, None]).sum(axis=1)
        column = np.minimum(column, self.lengths[states] - 1)
        return self.targets[states, column]


def feynman_kac_chain(op: LumpedOperator) -> JumpChain:
    """Rates of S_N; potential N F_g = diagonal + exit rate."""
    exit_rate = np.asarray(op.rates.sum(axis=1)).ravel()
    return JumpChain.from_rates(op, op.rates, op.diag + exit_rate)


def uniform_chain(op: LumpedOperator) -> JumpChain:
    """g = 1 dynamics: rates c_a K[a][b] with potential N F."""
    weights = log_mu(op.grid, op.points)
    coo = op.rates.tocoo()
    tilt = np.exp(0.5 * (weights[coo.col] - weights[coo.row]))
    rates = sparse.csr_matrix((coo.data * tilt, (coo.row, coo.col)), shape=op.rates.shape)
    potential = op.N * np.asarray(op.spec.interaction(op.points / float(op.N)))
    return JumpChain.from_rates(op, rates, potential)


def ground_chain(op: LumpedOperator, gs: GroundStateSolution) -> JumpChain:
    doob = doob_generator(op, gs)
    return JumpChain.from_rates(op, doob.rates, np.zeros(len(op)))


# ----------------------------------------------
# Chunks
#
@dataclass
class ChunkResult:
    log_weight: np.ndarray
    terminal: np.ndarray
    jumps: Optional[sparse.coo_matrix] = None


def _run_chunk(
    chain: JumpChain,
    start: np.ndarray,
    T: float,
    rng: np.random.Generator,
    record_jumps: bool = False,
) -> ChunkResult:
    """Simulate len(start) paths to time T, accumulating int potential dt."""
    state = start.copy()
    clock = np.zeros(state.size)
    log_weight = np.zeros(state.size)
    alive = np.arange(state.size)
    sources: list[np.ndarray] = []
    destinations: list[np.ndarray] = []
    while alive.size:
        current = state[alive]
        rate = chain.exit_rate[current]
        with np.errstate(divide="ignore"):
            hold = rng.exponential(1.0, alive.size) / rate
        stop = clock[alive] + hold >= T
        finished = alive[stop]
        log_weight[finished] += chain.potential[state[finished]] * (T - clock[finished])
        moving = alive[~stop]
        log_weight[moving] += chain.potential[state[moving]] * hold[~stop]
        clock[moving] += hold[~stop]
        destination = chain.next_states(state[moving], rng)
        if record_jumps:
            sources.append(state[moving])
            destinations.append(destination)
        state[moving] = destination
        alive = moving
    jumps = None
    if record_jumps:
        n = len(chain)
        rows = np.concatenate(sources) if sources else np.empty(0, dtype=np.int64)
        cols = np.concatenate(destinations) if destinations else np.empty(0, dtype=np.int64)
        jumps = sparse.coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    return ChunkResult(log_weight=log_weight, terminal=state, jumps=jumps)


def _run_paths(
    chain: JumpChain,
    T: float,
    n_paths: int,
    seed: int,
    start: Optional[int] = None,
    start_law: Optional[np.ndarray] = None,
    record_jumps: bool = False,
    chunk: Optional[int] = None,
    threads: Optional[int] = None,
) -> list[ChunkResult]:
    """Chunks in index order; start is a fixed state or drawn from start_law."""
    check_seed(seed)
    chunk = settings.MFGS_MC_CHUNK if chunk is None else chunk
    threads = settings.MFGS_THREADS if threads is None else threads
    bounds = [(c, c * chunk, min((c + 1) * chunk, n_paths)) for c in range(math.ceil(n_paths / chunk))]

    def work(bound: tuple[int, int, int]) -> ChunkResult:
        index, lo, hi = bound
        rng = chunk_generator(seed, index)
        if start_law is None:
            initial = np.full(hi - lo, start, dtype=np.int64)
        else:
            initial = rng.choice(len(chain), size=hi - lo, p=start_law)
        return _run_chunk(chain, initial, T, rng, record_jumps)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(work, bounds))
    logger.debug("Simulated %d paths in %d chunk(s) on %d thread(s)", n_paths, len(bounds), threads)
    return results


# ----------------------------------------------
# Single paths
#
@dataclass(frozen=True)
class PathSample:
    """One recorded path; integral is int_0^T F_g(m(t)) dt."""

    jump_times: np.ndarray
    points: np.ndarray
    integral: float
    terminal: tuple[int, ...]
    seed: int
    path_index: int


def _state_index(op: LumpedOperator, counts: Sequence[int]) -> int:
    if not op.grid.contains(counts):
        raise DomainError(f"{tuple(counts)} is not a point of the grid", {"N": op.N})
    return int(op.grid.index_of(np.asarray(counts)))


def simulate_path(
    spec: ModelSpec,
    N: int,
    m0: Sequence[int],
    T: float,
    seed: int,
    path_index: int = 0,
    op: Optional[LumpedOperator] = None,
) -> PathSample:
    """Exponential-clock simulation of one path from its own (seed, path_index) stream."""
    if T < 0:
        raise DomainError(f"Time must be nonnegative, got {T}")
    op = assemble(spec, N) if op is None else op
    chain = feynman_kac_chain(op)
    rng = chunk_generator(seed, path_index)
    state: int = _state_index(op, m0)
    clock: float = 0.0
    total: float = 0.0
    times: list[float] = []
    visited: list[int] = [state]
    while True:
        hold: float = rng.exponential(1.0) / chain.exit_rate[state]
        if clock + hold >= T:
            total += chain.potential[state] * (T - clock)
            break
        total += chain.potential[state] * hold
        clock += hold
        state = int(chain.next_states(np.array([state]), rng)[0])
        times.append(clock)
        visited.append(state)
    points = op.points[np.array(visited)]
    return PathSample(
        jump_times=np.array(times),
        points=points,
        integral=total / N,
        terminal=tuple(int(c) for c in points[-1]),
        seed=seed,
        path_index=path_index,
    )


def first_jumps(
    spec: ModelSpec,
    N: int,
    m0: Sequence[int],
    n_paths: int,
    seed: int,
    op: Optional[LumpedOperator] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Holding times and destinations (count vectors) of the first jump from m0."""
    op = assemble(spec, N) if op is None else op
    chain = feynman_kac_chain(op)
    rng = chunk_generator(seed, 0)
    state = np.full(n_paths, _state_index(op, m0), dtype=np.int64)
    hold = rng.exponential(1.0, n_paths) / chain.exit_rate[state]
    return hold, op.points[chain.next_states(state, rng)]


# ----------------------------------------------
# Estimators
#
@dataclass(frozen=True)
class FeynmanKacEstimate:
    """
    Mean of exp(N int F_g) 1{m(T) = m1} over n_paths paths.

    log_mean is the log of the mean and z = log_mean / N the Z estimate
    with its delta-method error z_error. status is "no-hit" when no path
    ends at m1 and "overflow" when the mean itself exceeds a float; z and
    z_error are still reported then.
    """

    m0: tuple[int, ...]
    m1: Optional[tuple[int, ...]]
    T: float
    N: int
    mean: float
    std_error: float
    log_mean: float
    z: float
    z_error: float
    n_paths: int
    hits: int
    seed: int
    dynamics: str
    status: str

    def to_record(self) -> dict:
        return {
            "target": {"m0": list(self.m0), "m1": None if self.m1 is None else list(self.m1), "T": self.T, "N": self.N},
            "mean": self.mean,
            "std_error": self.std_error,
            "mean_log": self.log_mean,
            "z": self.z,
            "z_error": self.z_error,
            "n_paths": self.n_paths,
            "hits": self.hits,
            "seed": self.seed,
            "dynamics": self.dynamics,
            "status": self.status,
        }


def _summarize(log_terms: np.ndarray, n_paths: int) -> tuple[float, float, float, float]:
    """
    log of the mean, mean, standard error and relative error of exp(log_terms)
    padded with zeros to n_paths. Past OVERFLOW_LOG the mean and standard
    error are inf; the log mean and relative error stay finite.
    """
    if not log_terms.size:
        return -math.inf, 0.0, 0.0, math.nan
    top: float = float(log_terms.max())
    scaled = np.zeros(n_paths)
    scaled[: log_terms.size] = np.exp(log_terms - top)
    log_mean: float = float(logsumexp(log_terms) - math.log(n_paths))
    scaled_mean: float = float(np.mean(scaled))
    scaled_error: float = float(np.std(scaled, ddof=1) / math.sqrt(n_paths))
    relative: float = scaled_error / scaled_mean
    if top >= OVERFLOW_LOG:
        return log_mean, math.inf, math.inf, relative
    scale: float = math.exp(top)
    return log_mean, scaled_mean * scale, scaled_error * scale, relative


def estimate_Z(
    spec: ModelSpec,
    N: int,
    m0: Sequence[int],
    m1: Optional[Sequence[int]],
    T: float,
    n_paths: int,
    seed: int,
    dynamics: Dynamics = "default",
    op: Optional[LumpedOperator] = None,
    chunk: Optional[int] = None,
    threads: Optional[int] = None,
) -> FeynmanKacEstimate:
    """
    Estimate <m1| e^{T S_N} |m0>, or the row sum over m1 when m1 is None.

    "uniform" simulates the g = 1 chain with weight exp(N int F) and
    multiplies by sqrt(mu_N(m0) / mu_N(m1)).
    """
    if n_paths < MIN_PATHS:
        raise DomainError(f"Need at least {MIN_PATHS} paths, got {n_paths}")
    if T < 0:
        raise DomainError(f"Time must be nonnegative, got {T}")
    if dynamics not in DYNAMICS:
        raise DomainError(f"Unknown dynamics {dynamics!r}")
    if dynamics == "uniform" and m1 is None:
        raise DomainError("Uniform dynamics needs an end point")
    op = assemble(spec, N) if op is None else op
    chain = feynman_kac_chain(op) if dynamics == "default" else uniform_chain(op)
    start: int = _state_index(op, m0)
    end: Optional[int] = None if m1 is None else _state_index(op, m1)

    results = _run_paths(chain, T, n_paths, seed, start=start, chunk=chunk, threads=threads)
    log_weight = np.concatenate([r.log_weight for r in results])
    terminal = np.concatenate([r.terminal for r in results])
    hit = np.ones(n_paths, dtype=bool) if end is None else terminal == end
    log_terms = log_weight[hit]
    if dynamics == "uniform":
        weights = log_mu(op.grid, op.points)
        log_terms = log_terms + 0.5 * (weights[start] - weights[end])

    hits: int = int(hit.sum())
    log_mean, mean, std_error, relative = _summarize(log_terms, n_paths)
    if hits == 0:
        logger.warning("No path from %s reached %s in time %g", tuple(m0), tuple(m1), T)
        z, z_error, status = math.nan, math.nan, "no-hit"
    else:
        z, z_error = log_mean / N, relative / N
        status = "overflow" if math.isinf(mean) else "ok"
        if status == "overflow":
            logger.warning("Weights overflow a float (log mean %.6g); only the log-space summary is finite", log_mean)
    return FeynmanKacEstimate(
        m0=tuple(int(c) for c in m0),
        m1=None if m1 is None else tuple(int(c) for c in m1),
        T=float(T),
        N=N,
        mean=mean,
        std_error=std_error,
        log_mean=log_mean,
        z=z,
        z_error=z_error,
        n_paths=n_paths,
        hits=hits,
        seed=seed,
        dynamics=dynamics,
        status=status,
    )


# ----------------------------------------------
# Ground-state chain
#
@dataclass(frozen=True, eq=False)
class GroundChainSample:
    """Terminal empirical law of the ground-state chain and its jump counts."""

    points: np.ndarray
    empirical: np.ndarray
    nu: np.ndarray
    jumps: sparse.csr_matrix
    n_paths: int
    T: float
    seed: int

    @property
    def total_variation(self) -> float:
        return 0.5 * float(np.abs(self.empirical - self.nu).sum())

    def mass_near(self, centres: Sequence[float], radius: float) -> float:
        """Empirical mass with magnetization within radius of a centre (two labels)."""
        m = (self.points[:, 1] - self.points[:, 0]) / float(self.points[0].sum())
        near = np.zeros(m.size, dtype=bool)
        for c in centres:
            near |= np.abs(m - c) <= radius
        return float(self.empirical[near].sum())


def sample_ground_chain(
    spec: ModelSpec,
    gs: GroundStateSolution,
    N: int,
    m0: Optional[Sequence[int]],
    T: float,
    n_paths: int,
    seed: int,
    op: Optional[LumpedOperator] = None,
    chunk: Optional[int] = None,
    threads: Optional[int] = None,
) -> GroundChainSample:
    """Run the Doob chain; m0 = None starts every path from nu_N = h^2."""
    if T < 0:
        raise DomainError(f"Time must be nonnegative, got {T}")
    if gs.N != N:
        raise DomainError("Ground state was computed for another N", {"N": N, "ground_state_N": gs.N})
    op = assemble(spec, N) if op is None else op
    chain = ground_chain(op, gs)
    nu = gs.nu / gs.nu.sum()
    if m0 is None:
        results = _run_paths(chain, T, n_paths, seed, start_law=nu, record_jumps=True, chunk=chunk, threads=threads)
    else:
        start: int = _state_index(op, m0)
        results = _run_paths(chain, T, n_paths, seed, start=start, record_jumps=True, chunk=chunk, threads=threads)
    terminal = np.concatenate([r.terminal for r in results])
    empirical = np.bincount(terminal, minlength=len(op)) / float(n_paths)
    jumps = sum((r.jumps.tocsr() for r in results), sparse.csr_matrix((len(op), len(op))))
    sample = GroundChainSample(
        points=op.points, empirical=empirical, nu=nu, jumps=jumps, n_paths=n_paths, T=float(T), seed=seed
    )
    logger.info("Ground chain: %d paths to T=%g, total variation %.4f", n_paths, T, sample.total_variation)
    return sample
