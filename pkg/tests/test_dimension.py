from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitfacets.ucum.dimension import DIMENSIONLESS, LENGTH, MASS, TIME, Dimension

exponent_vectors = st.tuples(*[st.integers(min_value=-6, max_value=6)] * 7)


def test_zero_vector_is_dimensionless():
    assert DIMENSIONLESS.is_dimensionless
    assert Dimension((0, 0, 0, 0, 0, 0, 0)) == DIMENSIONLESS
    assert not LENGTH.is_dimensionless


def test_product_sums_exponents():
    force = LENGTH + MASS + TIME * -2
    assert force.exponents == (1, 1, -2, 0, 0, 0, 0)


def test_power_scales_exponents():
    assert (LENGTH * 3).exponents == (3, 0, 0, 0, 0, 0, 0)
    assert (Dimension((1, 1, -2, 0, 0, 0, 0)) * -1).exponents == (-1, -1, 2, 0, 0, 0, 0)


def test_requires_seven_integer_exponents():
    with pytest.raises(ValueError):
        Dimension((1, 0, 0))
    with pytest.raises(ValueError):
        Dimension((1.5, 0, 0, 0, 0, 0, 0))


def test_str_forms():
    assert str(DIMENSIONLESS) == "1"
    assert str(LENGTH) == "L"
    assert str(Dimension((1, 1, -2, 0, 0, 0, 0))) == "L·M·T^-2"


@given(exponent_vectors, exponent_vectors)
def test_addition_commutes(a, b):
    assert Dimension(a) + Dimension(b) == Dimension(b) + Dimension(a)


@given(exponent_vectors, st.integers(min_value=-4, max_value=4))
def test_scalar_multiple_matches_repeated_addition(a, k):
    dim = Dimension(a)
    total = DIMENSIONLESS
    for _ in range(abs(k)):
        total = total + dim if k > 0 else total - dim
    assert dim * k == total
