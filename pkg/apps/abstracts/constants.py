"""Numeric sentinels shared by every compute app."""

# Python modules
import math


# Cost of a forbidden move (rate function diverges).
INFINITE_COST: float = math.inf

# Lower bound whose precondition fails carries no information.
VACUOUS_BOUND: float = -math.inf


def is_forbidden(value: float) -> bool:
    return value == INFINITE_COST
