"""
Sparse real polynomials in the d simplex coordinates.

A polynomial is a tuple of (exponents, coefficient) terms with unique
exponent vectors. Evaluation is vectorised over stacks of points.
"""

# Python modules
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

# Third party modules
import numpy as np
from numpy.polynomial import Polynomial as UnivariatePolynomial


Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    """Polynomial F(m) = sum_k c_k prod_alpha m_alpha^{e_k,alpha}."""

    terms: tuple[tuple[Exponents, float], ...]

    def __post_init__(self) -> None:
        seen: set[Exponents] = set()
        width: int | None = None
        for exps, coeff in self.terms:
            if exps in seen:
                raise ValueError(f"Duplicate exponent vector {exps}")
            if any(e < 0 for e in exps):
                raise ValueError(f"Negative exponent in {exps}")
            if width is not None and len(exps) != width:
                raise ValueError("All exponent vectors must have the same length")
            if not np.isfinite(coeff):
                raise ValueError(f"Coefficient of {exps} is not finite")
            width = len(exps)
            seen.add(exps)

    # ------------------------------------------------------------------
    # Construction
    #
    @classmethod
    def from_mapping(cls, mapping: Mapping[Sequence[int], float]) -> "Polynomial":
        """Build from exponent -> coefficient, merging equal keys and dropping zeros."""
        merged: dict[Exponents, float] = {}
        for exps, coeff in mapping.items():
            key: Exponents = tuple(int(e) for e in exps)
            merged[key] = merged.get(key, 0.0) + float(coeff)
        return cls(tuple(sorted((k, v) for k, v in merged.items() if v != 0.0)))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Sequence[int], float]]) -> "Polynomial":
        """Build from (exponents, coefficient) pairs; duplicates are rejected."""
        return cls(tuple((tuple(int(e) for e in exps), float(c)) for exps, c in terms))

    @classmethod
    def zero(cls, d: int) -> "Polynomial":
        return cls(((tuple([0] * d), 0.0),))

    # ------------------------------------------------------------------
    # Queries
    #
    @property
    def d(self) -> int:
        return len(self.terms[0][0]) if self.terms else 0

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps, c in self.terms if c != 0.0), default=0)

    @property
    def exponent_matrix(self) -> np.ndarray:
        return np.array([exps for exps, _ in self.terms], dtype=np.int64).reshape(len(self.terms), -1)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=float)

    def is_zero(self) -> bool:
        return all(c == 0.0 for _, c in self.terms)

    # ------------------------------------------------------------------
    # Evaluation
    #
    def __call__(self, m: np.ndarray | Sequence[float]) -> np.ndarray | float:
        """Evaluate at one point (shape (d,)) or a stack of points (shape (n, d))."""
        points = np.asarray(m, dtype=float)
        single: bool = points.ndim == 1
        points = np.atleast_2d(points)
        if not self.terms:
            values = np.zeros(points.shape[0])
        else:
            # (n, terms, d) -> product over d
            monomials = np.prod(points[:, None, :] ** self.exponent_matrix[None, :, :], axis=2)
            values = monomials @ self.coefficients
        return float(values[0]) if single else values

    def evaluate_terms(self, m: Sequence[float]) -> float:
        """Term-by-term scalar evaluation, used as a reference."""
        total: float = 0.0
        for exps, coeff in self.terms:
            monomial: float = 1.0
            for x, e in zip(m, exps):
                monomial *= float(x) ** e
            total += coeff * monomial
        return total

    # ------------------------------------------------------------------
    # Two-label helpers
    #
    def magnetization_polynomial(self) -> UnivariatePolynomial:
        """
        F as a polynomial in x = m_1 - m_0 for d = 2.

        Substitutes m_0 = (1 - x)/2 and m_1 = (1 + x)/2.
        """
        if self.d != 2:
            raise ValueError("Magnetization form needs exactly two labels")
        lower = UnivariatePolynomial([0.5, -0.5])
        upper = UnivariatePolynomial([0.5, 0.5])
        result = UnivariatePolynomial([0.0])
        for (e0, e1), coeff in self.terms:
            result = result + coeff * (lower ** e0) * (upper ** e1)
        return result.trim() if result.degree() > 0 else result

    def is_reflection_symmetric(self, tol: float = 1e-14) -> bool:
        """True when F(-x) = F(x) in the magnetization variable."""
        coef = self.magnetization_polynomial().coef
        odd = coef[1::2]
        scale: float = max(1.0, float(np.max(np.abs(coef))) if coef.size else 1.0)
        return bool(np.all(np.abs(odd) <= tol * scale))


def linear_form_power(weights: Sequence[float], p: int, coefficient: float = 1.0) -> Polynomial:
    """Expand coefficient * (sum_alpha w_alpha m_alpha)^p by the multinomial theorem."""
    d: int = len(weights)
    mapping: dict[Exponents, float] = {}
    for exps in product(range(p + 1), repeat=d):
        if sum(exps) != p:
            continue
        multinomial: int = 1
        remaining: int = p
        for e in exps:
            multinomial *= comb(remaining, e)
            remaining -= e
        value: float = float(multinomial)
        for w, e in zip(weights, exps):
            value *= float(w) ** e
        if value != 0.0:
            mapping[exps] = coefficient * value
    if not mapping:
        return Polynomial.zero(d)
    return Polynomial.from_mapping(mapping)
