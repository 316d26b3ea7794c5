"""
Pytest fixtures for the hj_halfspin app.
"""

import pytest

from apps.hj_halfspin.effective import p_body_critical
from apps.hj_halfspin.tests.tools import ProfileBuilder
from apps.modelspec.spec import ModelSpec, curie_weiss, p_body_model


@pytest.fixture
def profile_builder() -> ProfileBuilder:
    """Provide a ProfileBuilder instance."""
    return ProfileBuilder()


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5: two symmetric wells."""
    return curie_weiss(0.5)


@pytest.fixture
def cw_two() -> ModelSpec:
    """Curie-Weiss with a transverse field of 2: one well at 0."""
    return curie_weiss(2.0)


@pytest.fixture
def p4_critical() -> ModelSpec:
    """Four-body model at its critical field: wells at 0 and +-m_hat."""
    return p_body_model(4, p_body_critical(4).lambda_c)
