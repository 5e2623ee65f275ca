"""Shared fixtures for the hkquot test-suite."""

from fractions import Fraction

import pytest

from hkquot import WeightSystem


@pytest.fixture
def hirzebruch1() -> WeightSystem:
    """Weights of the Sigma_1 system with theta = (1/2, 1/2)."""
    return WeightSystem(
        rank=2,
        weights=((1, 0), (1, 0), (0, 1), (-1, 1)),
        theta=(Fraction(1, 2), Fraction(1, 2)),
    )


@pytest.fixture
def diag_circle2() -> WeightSystem:
    """Diagonal circle on C^2 with theta = 1/2; quotient is P^1."""
    return WeightSystem(rank=1, weights=((1,), (1,)), theta=(Fraction(1, 2),))
