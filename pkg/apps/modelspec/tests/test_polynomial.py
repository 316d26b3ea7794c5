import pytest
from contextlib import nullcontext as does_not_raise
from typing import Any

import numpy as np

from apps.modelspec.polynomial import Polynomial, linear_form_power
from apps.modelspec.spec import p_body_interaction


class TestPolynomial:
    @pytest.mark.parametrize(
        argnames=["terms", "expectation"],
        argvalues=[
            ([((2, 0), 1.0), ((0, 2), 1.0)], does_not_raise()),
            ([((1, 0), 1.0), ((1, 0), 2.0)], pytest.raises(ValueError)),
            ([((-1, 1), 1.0)], pytest.raises(ValueError)),
            ([((1, 0), 1.0), ((1, 0, 0), 1.0)], pytest.raises(ValueError)),
            ([((1, 0), float("nan"))], pytest.raises(ValueError)),
        ]
    )
    def test_construction(self, terms: list, expectation: Any) -> None:
        with expectation:
            poly = Polynomial.from_terms(terms)
            assert poly.d == 2, f"{poly.d} must be equal 2"

    def test_from_mapping_merges_and_drops_zeros(self) -> None:
        poly = Polynomial.from_mapping({(1, 0): 1.0, (0, 1): 0.0})
        assert poly.terms == (((1, 0), 1.0),), f"{poly.terms} must be equal (((1, 0), 1.0),)"

    @pytest.mark.parametrize(
        argnames=["point", "res"],
        argvalues=[
            ((0.25, 0.75), 0.125),
            ((0.5, 0.5), 0.0),
            ((1.0, 0.0), 0.5),
        ]
    )
    def test_curie_weiss_values(self, point: tuple[float, float], res: float) -> None:
        poly = p_body_interaction(2, 0.5, 0.5)
        value: float = poly(point)
        assert value == pytest.approx(res, abs=1e-15), f"{value} must be equal {res}"
        reference: float = poly.evaluate_terms(point)
        assert value == pytest.approx(reference, abs=1e-15), f"{value} must be equal {reference}"

    def test_stack_evaluation(self) -> None:
        poly = p_body_interaction(2, 0.5, 0.5)
        values = poly(np.array([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]]))
        assert np.allclose(values, [0.0, 0.5, 0.5]), f"{values} must be equal [0, 0.5, 0.5]"

    def test_linear_form_power(self) -> None:
        poly = linear_form_power((1.0, 2.0), 2)
        value: float = poly((0.5, 0.5))
        assert value == pytest.approx(2.25), f"{value} must be equal 2.25"
        assert poly.degree == 2, f"{poly.degree} must be equal 2"

    def test_magnetization_polynomial(self) -> None:
        coef = p_body_interaction(2, 0.5, 0.5).magnetization_polynomial().coef
        assert np.allclose(coef, [0.0, 0.0, 0.5]), f"{coef} must be equal [0, 0, 0.5]"
        quartic = p_body_interaction(4, 0.5).magnetization_polynomial().coef
        assert np.allclose(quartic, [0.0, 0.0, 0.0, 0.0, 1.0]), f"{quartic} must be equal x^4"

    @pytest.mark.parametrize(
        argnames=["p", "res"],
        argvalues=[
            (2, True),
            (3, False),
            (4, True),
        ]
    )
    def test_reflection_symmetry(self, p: int, res: bool) -> None:
        symmetric: bool = p_body_interaction(p, 0.5).is_reflection_symmetric()
        assert symmetric is res, f"{symmetric} must be equal {res}"

    def test_zero_polynomial(self) -> None:
        poly = Polynomial.zero(3)
        assert poly.is_zero(), "zero polynomial must report is_zero"
        assert poly((0.2, 0.3, 0.5)) == 0.0, "zero polynomial must vanish"
