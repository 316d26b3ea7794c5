"""
Pytest fixtures for the potentials app.
"""

import pytest

from apps.modelspec.spec import ModelSpec, curie_weiss, p_body_model
from apps.potentials.tests.tools import SampleBuilder


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5."""
    return curie_weiss(0.5)


@pytest.fixture
def cw_one() -> ModelSpec:
    """Curie-Weiss with a transverse field of 1."""
    return curie_weiss(1.0)


@pytest.fixture
def spin_one() -> ModelSpec:
    """Spin-1 Curie-Weiss type model, three labels on a path graph."""
    return p_body_model(2, 1.0, s=1, coefficient=0.5)


@pytest.fixture
def sample_builder() -> SampleBuilder:
    """Provide a SampleBuilder instance."""
    return SampleBuilder()
