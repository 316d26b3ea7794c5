"""Transverse-field rate kernels."""

# Python modules
from fractions import Fraction
from typing import Literal

# Third party modules
import numpy as np


Convention = Literal["spin", "pauli"]
CONVENTIONS: tuple[str, ...] = ("spin", "pauli")


def half_integer(s: float | Fraction | str) -> Fraction:
    """Parse s as a positive half-integer or raise ValueError."""
    twice: float = 2 * float(Fraction(s))
    if twice <= 0 or abs(twice - round(twice)) > 1e-12:
        raise ValueError(f"Spin must be a positive half-integer, got {s}")
    return Fraction(round(twice), 2)


def spin_labels(s: float | Fraction) -> tuple[float, ...]:
    """Eigenvalues of S^z in increasing order: -s, -s+1, ..., s."""
    spin: Fraction = half_integer(s)
    d: int = int(2 * spin) + 1
    return tuple(float(-spin + k) for k in range(d))


def spin_s_kernel(
    s: float | Fraction,
    lam: float,
    convention: Convention = "spin",
) -> tuple[tuple[float, ...], np.ndarray]:
    """
    Kernel of the transverse field lam * S^x for spin s.

    K[a][b] = (lam/2) * sqrt(s(s+1) - a*b) when |a - b| = 1, else 0.
    The "pauli" convention is only defined for s = 1/2: the field is
    lam * sigma^x, labels are -1 and +1, and K[-1][1] = lam.
    """
    if lam < 0:
        raise ValueError(f"Field strength must be nonnegative, got {lam}")
    if convention not in CONVENTIONS:
        raise ValueError(f"Unknown convention {convention!r}")

    spin: Fraction = half_integer(s)
    if convention == "pauli":
        if spin != Fraction(1, 2):
            raise ValueError("Pauli convention exists only for s = 1/2")
        kernel = np.array([[0.0, lam], [lam, 0.0]])
        return (-1.0, 1.0), kernel

    labels = spin_labels(spin)
    d: int = len(labels)
    ss: float = float(spin * (spin + 1))
    kernel = np.zeros((d, d))
    for i in range(d - 1):
        a, b = labels[i], labels[i + 1]
        kernel[i, i + 1] = kernel[i + 1, i] = 0.5 * lam * np.sqrt(ss - a * b)
    return labels, kernel
