import pytest
from contextlib import nullcontext as does_not_raise
from typing import Any

import numpy as np

from apps.abstracts.exceptions import DomainError
from apps.modelspec.spec import ModelSpec, eval_F
from apps.potentials.fields import (
    F_g,
    F_g_default,
    H,
    H0,
    TangentVector,
    V,
    grad_H0,
    pair_weights,
    xi_N,
)
from apps.potentials.tests.tools import SampleBuilder


def _point(x: float) -> np.ndarray:
    return np.array([(1.0 - x) / 2.0, (1.0 + x) / 2.0])


class TestEffectivePotential:
    @pytest.mark.parametrize(
        argnames=["x", "res"],
        argvalues=[
            (0.0, 0.0),
            (np.sqrt(0.75), -0.125),
            (-np.sqrt(0.75), -0.125),
        ]
    )
    def test_curie_weiss_values(self, cw_half: ModelSpec, x: float, res: float) -> None:
        value: float = V(cw_half, _point(x))
        assert value == pytest.approx(res, abs=1e-14), f"{value} must be equal {res}"

    def test_uniform_point_without_interaction(self, spin_one: ModelSpec) -> None:
        from dataclasses import replace
        from apps.modelspec.polynomial import Polynomial

        free = replace(spin_one, interaction=Polynomial.zero(3))
        value: float = V(free, np.full(3, 1.0 / 3.0))
        assert value == pytest.approx(0.0, abs=1e-15), f"{value} must be equal 0"

    def test_stack_evaluation(self, cw_half: ModelSpec) -> None:
        points = np.stack([_point(0.0), _point(np.sqrt(0.75))])
        values = V(cw_half, points)
        assert np.allclose(values, [0.0, -0.125]), f"{values} must be equal [0, -0.125]"

    def test_off_simplex(self, cw_half: ModelSpec) -> None:
        with pytest.raises(DomainError):
            V(cw_half, (0.6, 0.6))


class TestFiniteSizeCorrection:
    def test_pauli_center_value(self, cw_one: ModelSpec) -> None:
        value: float = xi_N(cw_one, 100, (0.5, 0.5))
        assert value == pytest.approx(9.950e-3, rel=1e-3), f"{value} must be equal 9.950e-3"

    def test_positive_on_boundary(self, cw_one: ModelSpec) -> None:
        value: float = xi_N(cw_one, 100, (0.0, 1.0))
        assert value > 0, f"{value} must be positive"

    def test_halves_with_N(self, cw_one: ModelSpec) -> None:
        ratio: float = xi_N(cw_one, 100, (0.5, 0.5)) / xi_N(cw_one, 200, (0.5, 0.5))
        assert ratio == pytest.approx(2.0, rel=0.05), f"{ratio} must be equal 2"


class TestGirsanov:
    @pytest.mark.parametrize(
        argnames=["N", "counts"],
        argvalues=[
            (4, (3, 1)),
            (4, (2, 2)),
            (10, (0, 10)),
            (25, (7, 18)),
        ]
    )
    def test_default_g_decomposition(self, cw_half: ModelSpec, N: int, counts: tuple) -> None:
        value: float = F_g(cw_half, N, counts)
        expected: float = F_g_default(cw_half, N, np.asarray(counts) / N)
        assert value == pytest.approx(expected, abs=1e-10), f"{value} must be equal {expected}"

    def test_spin_one_decomposition(self, spin_one: ModelSpec) -> None:
        value: float = F_g(spin_one, 6, (1, 2, 3))
        expected: float = F_g_default(spin_one, 6, np.array([1, 2, 3]) / 6)
        assert value == pytest.approx(expected, abs=1e-10), f"{value} must be equal {expected}"

    def test_trivial_tilt(self, cw_half: ModelSpec) -> None:
        value: float = F_g(cw_half, 4, (1, 3), g=lambda m: 1.0)
        expected: float = eval_F(cw_half, (0.25, 0.75))
        assert value == pytest.approx(expected), f"{value} must be equal {expected}"

    @pytest.mark.parametrize(
        argnames=["counts", "g", "expectation"],
        argvalues=[
            ((2, 2), lambda m: 1.0, does_not_raise()),
            ((2, 2), lambda m: 0.0, pytest.raises(DomainError)),
            ((2, 2), lambda m: -1.0 if m == (1, 3) else 1.0, pytest.raises(DomainError)),
            ((2, 3), None, pytest.raises(DomainError)),
        ]
    )
    def test_arguments(self, cw_half: ModelSpec, counts: tuple, g: Any, expectation: Any) -> None:
        with expectation:
            F_g(cw_half, 4, counts, g=g)


class TestHamiltonian:
    def test_shift_invariance(self, spin_one: ModelSpec, sample_builder: SampleBuilder) -> None:
        m, _, theta = sample_builder.with_d(3).with_count(20).build()
        shifted = theta + np.random.default_rng(3).uniform(-5, 5, size=(20, 1))
        assert np.allclose(H0(spin_one, m, theta), H0(spin_one, m, shifted), atol=1e-12), \
            "H0 must be invariant under constant shifts"

    def test_zero_momentum(self, cw_half: ModelSpec) -> None:
        m = _point(0.3)
        value: float = H(cw_half, m, np.zeros(2))
        expected: float = -V(cw_half, m)
        assert value == pytest.approx(expected), f"{value} must be equal {expected}"

    @pytest.mark.parametrize(argnames=["x", "t"], argvalues=[(0.0, 0.4), (0.6, -1.2), (-0.9, 2.0)])
    def test_spin_half_form(self, cw_half: ModelSpec, x: float, t: float) -> None:
        value: float = H(cw_half, _point(x), np.array([-t, t]))
        expected: float = 0.5 * np.sqrt(1 - x ** 2) * np.cosh(2 * t) - 0.5 + 0.5 * x ** 2
        assert value == pytest.approx(expected, abs=1e-13), f"{value} must be equal {expected}"

    def test_convexity_along_segments(self, spin_one: ModelSpec, sample_builder: SampleBuilder) -> None:
        m, _, theta = sample_builder.with_d(3).with_count(100).build()
        other = np.random.default_rng(11).uniform(-2, 2, size=theta.shape)
        mid = H0(spin_one, m, 0.5 * (theta + other))
        ends = 0.5 * (H0(spin_one, m, theta) + H0(spin_one, m, other))
        assert np.all(mid <= ends + 1e-12), "H0 must be midpoint convex"

    def test_gradient_matches_finite_differences(self, spin_one: ModelSpec, sample_builder: SampleBuilder) -> None:
        m, _, theta = sample_builder.with_d(3).with_count(10).build()
        weights = pair_weights(spin_one, m)
        analytic = grad_H0(weights, theta)
        step: float = 1e-6
        for k in range(3):
            bump = np.zeros(3)
            bump[k] = step
            numeric = (H0(spin_one, m, theta + bump) - H0(spin_one, m, theta - bump)) / (2 * step)
            assert np.allclose(analytic[:, k], numeric, rtol=1e-6, atol=1e-8), \
                f"{analytic[:, k]} must be equal {numeric}"


class TestTangentVector:
    @pytest.mark.parametrize(
        argnames=["v", "expectation"],
        argvalues=[
            ((1.0, -1.0), does_not_raise()),
            ((0.0, 0.0, 0.0), does_not_raise()),
            ((1.0, 0.1), pytest.raises(DomainError)),
        ]
    )
    def test_zero_sum(self, v: tuple, expectation: Any) -> None:
        with expectation:
            TangentVector(np.array(v))
