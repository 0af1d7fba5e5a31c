from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitfacets.errors import (
    AffineInCompound,
    IncommensurableUnits,
    NonFiniteValue,
)
from unitfacets.ucum import commensurable, convert, parse_ucum, reduce_expr

REL_TOL = 1e-9

# Linear codes over the seed registry, grouped by dimension, used by the
# property tests below. Affine Celsius is handled separately.
LINEAR_POOLS = [
    ["m", "cm", "mm", "km", "[in_i]", "[ft_i]", "dam"],
    ["g", "kg", "mg", "ug"],
    ["s", "min", "h", "d", "ms"],
    ["m/s", "km/h", "cm/s", "[in_i]/min"],
    ["%", "1", "10", "{count}"],
    ["N", "kg.m/s2", "g.m/s2"],
    ["J", "N.m", "W.s", "kg.m2/s2"],
    ["Pa", "N/m2", "kPa"],
    ["Hz", "/s", "s-1"],
    ["L", "dm3", "cm3", "m3"],
]
ALL_LINEAR = [code for pool in LINEAR_POOLS for code in pool]

magnitudes = st.floats(
    min_value=1e-3, max_value=1e6, allow_nan=False, allow_infinity=False
)
signed_values = st.tuples(st.sampled_from([1.0, -1.0]), magnitudes).map(
    lambda t: t[0] * t[1]
)


def rel_close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(abs(a), abs(b), 1.0)


# --- frozen examples ---------------------------------------------------------

def test_reduce_cm(registry):
    red = reduce_expr(parse_ucum("cm", registry))
    assert red.dimension.exponents == (1, 0, 0, 0, 0, 0, 0)
    assert red.scale == pytest.approx(0.01, rel=REL_TOL)
    assert red.offset is None


def test_reduce_metre_is_reference(registry):
    red = reduce_expr(parse_ucum("m", registry))
    assert red.scale == 1.0
    assert red.offset is None


def test_reduce_percent(registry):
    red = reduce_expr(parse_ucum("%", registry))
    assert red.dimension.is_dimensionless
    assert red.scale == pytest.approx(0.01, rel=REL_TOL)


def test_reduce_force_expression(registry):
    # Hand-summed exponents: M1 L1 T-2.
    red = reduce_expr(parse_ucum("kg.m/s2", registry))
    assert red.dimension.exponents == (1, 1, -2, 0, 0, 0, 0)
    assert red.scale == pytest.approx(1.0, rel=REL_TOL)


def test_affine_in_product_rejected(registry):
    with pytest.raises(AffineInCompound):
        reduce_expr(parse_ucum("Cel.m", registry))
    with pytest.raises(AffineInCompound):
        reduce_expr(parse_ucum("Cel2", registry))
    with pytest.raises(AffineInCompound):
        reduce_expr(parse_ucum("mCel", registry))


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [("m", "cm", True), ("m", "m", True), ("m", "s", False), ("%", "1", True)],
)
def test_commensurable(registry, a, b, expected):
    assert commensurable(a, b, registry) is expected


@pytest.mark.parametrize(
    ("value", "source", "target", "expected"),
    [
        (0.25, "m", "cm", 25.0),
        (12.0, "cm", "m", 0.12),
        (7.3, "m", "m", 7.3),
        (25.0, "m/s", "km/h", 90.0),  # independent factor 3.6 = 3600/1000
        (0.0, "Cel", "K", 273.15),
        (85.6, "%", "1", 0.856),
        (100.0, "K", "Cel", -173.15),
        (1.0, "[ft_i]", "[in_i]", 12.0),
        (90.0, "min", "h", 1.5),
    ],
)
def test_convert_fixtures(registry, value, source, target, expected):
    result = convert(value, source, target, registry)
    assert rel_close(result.value, expected)
    assert result.source_code == source
    assert result.target_code == target


def test_convert_against_hand_built_factor_table(registry, factor_table):
    for entry in factor_table:
        got = convert(2.5, entry["source"], entry["target"], registry).value
        want = 2.5 * entry["factor"] + entry["offset"]
        assert rel_close(got, want), entry


def test_identity_conversion_is_exact(registry):
    for code in ("m", "km/h", "%", "[in_i]", "Cel"):
        for value in (7.3, -0.001, 1234.5678, 0.0):
            assert convert(value, code, code, registry).value == value


def test_incommensurable_reports_both_dimensions(registry):
    with pytest.raises(IncommensurableUnits) as excinfo:
        convert(1.0, "m", "s", registry)
    details = excinfo.value.details
    assert details["source_dimension"] == (1, 0, 0, 0, 0, 0, 0)
    assert details["target_dimension"] == (0, 0, 1, 0, 0, 0, 0)


def test_non_finite_input_rejected(registry):
    with pytest.raises(NonFiniteValue):
        convert(math.nan, "m", "cm", registry)
    with pytest.raises(NonFiniteValue):
        convert(math.inf, "m", "cm", registry)


def test_overflowing_conversion_rejected(registry):
    with pytest.raises(NonFiniteValue):
        convert(1e308, "Ym", "ym", registry)


# --- properties --------------------------------------------------------------

commensurable_pairs = st.one_of(
    *[
        st.tuples(st.sampled_from(pool), st.sampled_from(pool))
        for pool in LINEAR_POOLS + [["Cel", "K"]]
    ]
)


@given(pair=commensurable_pairs, value=signed_values)
def test_round_trip_within_tolerance(registry, pair, value):
    source, target = pair
    there = convert(value, source, target, registry).value
    back = convert(there, target, source, registry).value
    assert rel_close(back, value)


@given(
    pool=st.sampled_from(LINEAR_POOLS),
    indices=st.tuples(st.integers(0, 100), st.integers(0, 100), st.integers(0, 100)),
    value=signed_values,
)
def test_composition_for_linear_units(registry, pool, indices, value):
    u, v, w = (pool[i % len(pool)] for i in indices)
    direct = convert(value, u, w, registry).value
    hop = convert(convert(value, u, v, registry).value, v, w, registry).value
    assert rel_close(direct, hop)


# A leading "/" makes the reciprocal cover the whole term, so such codes do
# not compose by plain text concatenation; exclude them here.
CONCATENABLE = [code for code in ALL_LINEAR if not code.startswith("/")]


@given(a=st.sampled_from(CONCATENABLE), b=st.sampled_from(CONCATENABLE))
def test_dimension_homomorphism(registry, a, b):
    combined = reduce_expr(parse_ucum(f"{a}.{b}", registry))
    da = reduce_expr(parse_ucum(a, registry)).dimension
    db = reduce_expr(parse_ucum(b, registry)).dimension
    assert combined.dimension == da + db


@settings(max_examples=200)
@given(pair=commensurable_pairs)
def test_conversion_is_pure(registry, pair):
    source, target = pair
    first = convert(3.25, source, target, registry)
    second = convert(3.25, source, target, registry)
    assert first == second
