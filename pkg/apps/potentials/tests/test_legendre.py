import pytest
from typing import Any

import numpy as np

from apps.abstracts.constants import INFINITE_COST
from apps.abstracts.exceptions import ConvergenceError, DomainError
from apps.modelspec.spec import ModelSpec
from apps.potentials.fields import H0, V
from apps.potentials.legendre import (
    H0_biconjugate,
    L,
    L0_argmax,
    L0_closed_d2,
    L0_numeric,
)
from apps.potentials.tests.tools import SampleBuilder


ONE_MINUS_INV_E: float = 1.0 - np.exp(-1.0)


class TestClosedForm:
    @pytest.mark.parametrize(
        argnames=["m", "v", "res"],
        argvalues=[
            (0.0, 0.0, 0.0),
            (0.0, 2 * np.sinh(1.0), ONE_MINUS_INV_E),
            (0.0, -2 * np.sinh(1.0), ONE_MINUS_INV_E),
            (1.0, 0.0, 0.0),
            (1.0, 0.5, INFINITE_COST),
        ]
    )
    def test_values(self, cw_one: ModelSpec, m: float, v: float, res: float) -> None:
        value: float = L0_closed_d2(cw_one, m, v)
        assert value == pytest.approx(res, abs=1e-14), f"{value} must be equal {res}"

    def test_superlinear_growth(self, cw_one: ModelSpec) -> None:
        ratios = [L0_closed_d2(cw_one, 0.0, v) / (0.5 * v * np.log(v)) for v in (1e3, 1e4)]
        assert 0.8 < ratios[0] < ratios[1] < 1.0, f"{ratios} must approach 1 from below"

    def test_needs_two_labels(self, spin_one: ModelSpec) -> None:
        with pytest.raises(DomainError):
            L0_closed_d2(spin_one, 0.0, 1.0)


class TestNumericLegendre:
    def test_closed_form_point(self, cw_one: ModelSpec) -> None:
        value: float = L0_numeric(cw_one, (0.5, 0.5), (-np.sinh(1.0), np.sinh(1.0)))
        assert value == pytest.approx(ONE_MINUS_INV_E, abs=1e-9), f"{value} must be equal 1 - 1/e"

    def test_maximizer(self, cw_one: ModelSpec) -> None:
        theta = L0_argmax(cw_one, (0.5, 0.5), (-np.sinh(1.0), np.sinh(1.0)))
        assert np.allclose(theta, [-1.0, 0.0], atol=1e-8), f"{theta} must be equal [-1, 0]"

    def test_agrees_with_closed_form(self, cw_half: ModelSpec, sample_builder: SampleBuilder) -> None:
        m, v, _ = sample_builder.with_count(100).build()
        numeric = L0_numeric(cw_half, m, v)
        closed = L0_closed_d2(cw_half, m[:, 1] - m[:, 0], v[:, 1] - v[:, 0])
        assert np.allclose(numeric, closed, atol=1e-9, rtol=0), "numeric and closed forms must agree"

    @pytest.mark.parametrize(
        argnames=["m", "v", "res"],
        argvalues=[
            ((0.3, 0.7), (0.0, 0.0), 0.0),
            ((0.3, 0.7), (0.05, 0.05), INFINITE_COST),
            ((0.0, 1.0), (-1.0, 1.0), INFINITE_COST),
            ((0.0, 1.0), (1.0, -1.0), INFINITE_COST),
            ((0.0, 1.0), (0.0, 0.0), 0.0),
        ]
    )
    def test_sentinels(self, cw_half: ModelSpec, m: tuple, v: tuple, res: float) -> None:
        value: float = L0_numeric(cw_half, m, v)
        assert value == res, f"{value} must be equal {res}"

    def test_boundary_face_of_three_labels(self, spin_one: ModelSpec) -> None:
        m = (0.0, 0.5, 0.5)
        moving_inside = L0_numeric(spin_one, m, (0.0, 1.0, -1.0))
        leaving_face = L0_numeric(spin_one, m, (1.0, -1.0, 0.0))
        assert np.isfinite(moving_inside), f"{moving_inside} must be finite"
        assert leaving_face == INFINITE_COST, f"{leaving_face} must be infinite"

    def test_nonnegative(self, spin_one: ModelSpec, sample_builder: SampleBuilder) -> None:
        m, v, _ = sample_builder.with_d(3).with_count(100).build()
        values = L0_numeric(spin_one, m, v)
        assert np.all(values >= 0), "L0 must be nonnegative"
        assert np.all(values[np.abs(v).max(axis=1) > 1e-3] > 0), "L0 must vanish only at v = 0"

    def test_convergence_budget(self, cw_half: ModelSpec) -> None:
        with pytest.raises(ConvergenceError):
            L0_numeric(cw_half, (0.5, 0.5), (-3.0, 3.0), max_iter=1)

    def test_lagrangian_at_rest(self, cw_half: ModelSpec) -> None:
        m = np.array([0.2, 0.8])
        value: float = L(cw_half, m, np.zeros(2))
        expected: float = V(cw_half, m)
        assert value == pytest.approx(expected), f"{value} must be equal {expected}"


class TestBiconjugacy:
    @pytest.mark.parametrize(argnames=["model", "d"], argvalues=[("cw_half", 2), ("spin_one", 3)])
    def test_recovers_hamiltonian(self, model: str, d: int, request: Any, sample_builder: SampleBuilder) -> None:
        spec: ModelSpec = request.getfixturevalue(model)
        m, _, theta = sample_builder.with_d(d).with_count(20).build()
        for point, momentum in zip(m, theta):
            value: float = H0_biconjugate(spec, point, momentum)
            expected: float = H0(spec, point, momentum)
            assert value == pytest.approx(expected, abs=1e-6), f"{value} must be equal {expected}"
