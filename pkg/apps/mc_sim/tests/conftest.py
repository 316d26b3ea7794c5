"""
Pytest fixtures for the mc_sim app.
"""

import pytest

from apps.mc_sim.tests.tools import EstimateBuilder
from apps.modelspec.spec import ModelSpec, curie_weiss
from apps.spectral.ground import GroundStateSolution, ground_state
from apps.spectral.lumped import LumpedOperator, assemble


@pytest.fixture
def estimate_builder(cw16) -> EstimateBuilder:
    """Provide an EstimateBuilder instance sharing the N = 16 operator."""
    return EstimateBuilder().with_operator(cw16)


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5."""
    return curie_weiss(0.5)


@pytest.fixture(scope="module")
def cw16() -> LumpedOperator:
    """Lumped Curie-Weiss operator, lambda = 0.5, N = 16."""
    return assemble(curie_weiss(0.5), 16)


@pytest.fixture(scope="module")
def cw20_ground() -> tuple[LumpedOperator, GroundStateSolution]:
    """Lumped Curie-Weiss operator at N = 20 with its ground state."""
    op = assemble(curie_weiss(0.5), 20)
    return op, ground_state(op)
