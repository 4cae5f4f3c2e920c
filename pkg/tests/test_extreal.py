import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from envcalc.extreal import (
    ExtReal,
    MixedScalarError,
    NEG_INF,
    POS_INF,
    as_extreal,
    ext_add,
    ext_inf,
    ext_sub,
    ext_sup,
    format_scalar,
    parse_scalar,
)


def test_sum_convention_is_sup_biased():
    assert ext_add(POS_INF, NEG_INF) == POS_INF
    assert ext_add(NEG_INF, POS_INF) == POS_INF


def test_empty_sup_and_inf():
    assert ext_sup(()) == NEG_INF
    assert ext_inf(()) == POS_INF
    assert ext_sup(iter(())) == NEG_INF


def test_infinities_absorb():
    assert ext_add(POS_INF, ExtReal(Fraction(3))) == POS_INF
    assert ext_add(NEG_INF, ExtReal(Fraction(3))) == NEG_INF
    assert ext_sub(ExtReal(Fraction(1)), POS_INF) == NEG_INF


def test_mixed_backends_rejected():
    with pytest.raises(MixedScalarError):
        ext_add(ExtReal(Fraction(1)), ExtReal(0.5))
    with pytest.raises(MixedScalarError):
        ExtReal(Fraction(1)) < ExtReal(0.5)


def test_comparisons_accept_plain_scalars():
    a = ExtReal(Fraction(1, 2))
    assert a < 1
    assert a <= Fraction(1, 2)
    assert a == Fraction(1, 2)
    assert POS_INF > a
    assert NEG_INF < a
    assert not (POS_INF < POS_INF)


def test_finite_extraction():
    assert ExtReal(Fraction(7, 2)).finite() == Fraction(7, 2)
    with pytest.raises(ValueError):
        POS_INF.finite()


@pytest.mark.parametrize(
    "value,text",
    [
        (ExtReal(Fraction(3, 4)), "3/4"),
        (ExtReal(Fraction(-5)), "-5"),
        (POS_INF, "inf"),
        (NEG_INF, "-inf"),
    ],
)
def test_format_scalar(value, text):
    assert format_scalar(value) == text


def test_format_float_uses_repr():
    assert format_scalar(ExtReal(0.1)) == repr(0.1)


def test_parse_scalar_round_trips_exact():
    for s in ("3/4", "-5", "0", "1287361/17"):
        v = parse_scalar(s, exact=True)
        assert format_scalar(v) == s
    assert parse_scalar("inf").is_pos_inf
    assert parse_scalar("-inf").is_neg_inf


@given(st.fractions(max_denominator=10**6))
def test_parse_format_round_trip_property(q):
    assert parse_scalar(format_scalar(ExtReal(q)), exact=True).finite() == q


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip_property(x):
    assert parse_scalar(format_scalar(ExtReal(x)), exact=False).finite() == x


def test_as_extreal_passthrough():
    assert as_extreal(POS_INF) is POS_INF
    assert as_extreal(Fraction(2)) == ExtReal(Fraction(2))
    assert as_extreal(math.inf).is_pos_inf
    assert as_extreal(-math.inf).is_neg_inf


@given(
    st.lists(st.fractions(max_denominator=1000), min_size=1, max_size=8)
)
def test_sup_inf_agree_with_builtin(qs):
    vals = [ExtReal(q) for q in qs]
    assert ext_sup(vals).finite() == max(qs)
    assert ext_inf(vals).finite() == min(qs)
