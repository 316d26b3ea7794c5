"""
Pytest fixtures for the lax_oleinik app.
"""

import pytest

from apps.hj_halfspin.profile import HJProfile, admissible_psi
from apps.lax_oleinik.tests.tools import ValueGridBuilder
from apps.modelspec.spec import ModelSpec, curie_weiss, p_body_model


@pytest.fixture
def value_grid_builder() -> ValueGridBuilder:
    """Provide a ValueGridBuilder instance."""
    return ValueGridBuilder()


@pytest.fixture
def cw_half() -> ModelSpec:
    """Curie-Weiss with a transverse field of 0.5."""
    return curie_weiss(0.5)


@pytest.fixture
def spin_one_strong() -> ModelSpec:
    """Spin-1 model with F = m^2 / 2 whose field keeps the minimum at the uniform point."""
    return p_body_model(2, 3.0, s=1, coefficient=0.5)


@pytest.fixture(scope="module")
def cw_profile() -> HJProfile:
    """Analytic two-well psi of Curie-Weiss at lambda = 0.5."""
    return admissible_psi(curie_weiss(0.5))


@pytest.fixture(scope="module")
def cw_single_profile() -> HJProfile:
    """Analytic single-well psi of Curie-Weiss at lambda = 2."""
    return admissible_psi(curie_weiss(2.0), nodes=801)
