"""
Pytest fixtures for the modelspec app.
"""

import pytest

from apps.modelspec.spec import ModelSpec, curie_weiss, p_body_model
from apps.modelspec.tests.tools import ModelDocumentBuilder, ModelSpecBuilder


@pytest.fixture
def spec_builder() -> ModelSpecBuilder:
    """Provide a ModelSpecBuilder instance."""
    return ModelSpecBuilder()


@pytest.fixture
def document_builder() -> ModelDocumentBuilder:
    """Provide a ModelDocumentBuilder instance."""
    return ModelDocumentBuilder()


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5."""
    return curie_weiss(0.5)


@pytest.fixture
def p4_spec() -> ModelSpec:
    """Four-body spin-1/2 model at lambda = 1."""
    return p_body_model(4, 1.0)
