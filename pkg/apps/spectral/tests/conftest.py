"""
Pytest fixtures for the spectral app.
"""

import pytest

from apps.modelspec.spec import ModelSpec, curie_weiss, p_body_model
from apps.spectral.ground import GroundStateSolution
from apps.spectral.lumped import LumpedOperator
from apps.spectral.tests.tools import OperatorBuilder


LAMBDA_C_P4: float = 32.0 / 27.0


@pytest.fixture
def operator_builder() -> OperatorBuilder:
    """Provide an OperatorBuilder instance."""
    return OperatorBuilder()


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5."""
    return curie_weiss(0.5)


@pytest.fixture
def spin_one() -> ModelSpec:
    """Spin-1 model with F = m^2 / 2 in the S^z labels."""
    return p_body_model(2, 1.0, s=1, coefficient=0.5)


@pytest.fixture(scope="module")
def cw_400() -> tuple[LumpedOperator, GroundStateSolution]:
    """Curie-Weiss lambda = 0.5 at N = 400 with its ground state."""
    return OperatorBuilder().with_spec(curie_weiss(0.5)).with_N(400).solve()


@pytest.fixture(scope="module")
def p4_critical_400() -> LumpedOperator:
    """Four-body model at its critical field, N = 400."""
    return OperatorBuilder().with_spec(p_body_model(4, LAMBDA_C_P4)).with_N(400).build()
