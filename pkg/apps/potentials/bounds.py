"""Cheap two-sided bounds on L0."""

# Python modules
from collections import deque
from dataclasses import dataclass
from typing import Literal

# Third party modules
import numpy as np

# Django modules
from django.conf import settings

# Project modules
from apps.abstracts.constants import INFINITE_COST, VACUOUS_BOUND
from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec, check_simplex_point
from apps.potentials.fields import lambda_alpha, pair_weights


FlowMethod = Literal["tight", "log"]


@dataclass(frozen=True)
class Flow:
    """Antisymmetric edge flow f[alpha][beta] = -f[beta][alpha]."""

    f: np.ndarray

    def divergence(self) -> np.ndarray:
        """Net inflow per label: sum_alpha f[alpha][beta]."""
        return self.f.sum(axis=0)

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges with positive flow as (from, to, amount)."""
        rows, cols = np.nonzero(self.f > 0)
        return [(int(a), int(b), float(self.f[a, b])) for a, b in zip(rows, cols)]


def L0_lower_bound(spec: ModelSpec, m: np.ndarray, v: np.ndarray, alpha: int) -> float:
    """
    |v_a| (log(|v_a| / lambda_a) - 1), valid when |v_a| >= lambda_a.

    Returns VACUOUS_BOUND below that threshold.
    """
    point = check_simplex_point(m, spec.d)
    velocity = np.asarray(v, dtype=float)
    if not 0 <= alpha < spec.d:
        raise DomainError(f"Label index {alpha} out of range")

    speed: float = abs(float(velocity[alpha]))
    rate: float = float(lambda_alpha(spec, point)[alpha])
    if rate == 0.0:
        return 0.0 if speed == 0.0 else INFINITE_COST
    if speed < rate:
        return VACUOUS_BOUND
    return speed * (np.log(speed / rate) - 1.0)


def tree_flow(spec: ModelSpec, v: np.ndarray) -> Flow:
    """
    Flow along a BFS spanning tree of {K > 0} rooted at label 0 whose
    divergence is v. Each subtree sends its net demand through its parent edge.
    """
    velocity = np.asarray(v, dtype=float)
    d: int = spec.d
    parent = np.full(d, -1)
    order: list[int] = [0]
    seen = np.zeros(d, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in np.flatnonzero(spec.kernel[u] > 0):
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(int(w))
                queue.append(int(w))
    if not seen.all():
        raise DomainError("Kernel graph is not connected")

    demand = velocity.copy()
    f = np.zeros((d, d))
    for u in reversed(order[1:]):
        p = parent[u]
        f[p, u] += demand[u]
        f[u, p] -= demand[u]
        demand[p] += demand[u]
    return Flow(f)


def _edge_costs(a: np.ndarray, f: np.ndarray, method: FlowMethod) -> np.ndarray:
    amount = np.abs(f)
    costs = np.zeros_like(amount)
    live = amount > 0
    blocked = live & (a <= 0)
    ok = live & (a > 0)
    fa, aa = amount[ok], a[ok]
    if method == "tight":
        costs[ok] = fa * np.arcsinh(fa / (2.0 * aa)) - np.sqrt(4.0 * aa ** 2 + fa ** 2) + 2.0 * aa
    else:
        costs[ok] = fa * np.log1p(fa / aa)
    costs[blocked] = INFINITE_COST
    return costs


def L0_flow_upper_bound(
    spec: ModelSpec,
    m: np.ndarray,
    v: np.ndarray,
    flow: Flow | None = None,
    method: FlowMethod = "tight",
) -> float:
    """
    Upper bound on L0(m, v) from a flow f with divergence v.

    Each undirected edge carries |f| at cost
      tight: |f| asinh(|f| / 2a) - sqrt(4a^2 + f^2) + 2a,
      log:   |f| log(1 + |f| / a),
    with a = sqrt(m_a m_b) K. An edge with flow but zero a costs INFINITE_COST.

    "tight", the default, is the exact Legendre conjugate of the edge
    Hamiltonian 2a(cosh(t) - 1) and is never above "log"; "log" is the
    closed-form bound sum |f| log(1 + |f| / a). Both are upper bounds on L0.
    """
    if method not in ("tight", "log"):
        raise DomainError(f"Unknown flow bound method {method!r}")
    point = check_simplex_point(m, spec.d)
    velocity = np.asarray(v, dtype=float)
    scale: float = max(1.0, float(np.max(np.abs(velocity))))
    if abs(float(velocity.sum())) > settings.MFGS_SIMPLEX_TOL * scale:
        return INFINITE_COST

    flow = tree_flow(spec, velocity) if flow is None else flow
    if np.max(np.abs(flow.divergence() - velocity)) > 1e-9 * scale:
        raise DomainError("Flow divergence does not match the velocity")
    upper = np.triu(np.ones((spec.d, spec.d), dtype=bool), k=1)
    costs = _edge_costs(pair_weights(spec, point)[upper], flow.f[upper], method)
    return float(costs.sum())
