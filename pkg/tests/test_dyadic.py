from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetsum.dyadic import ONE, ZERO, Dyadic, as_dyadic
from cosetsum.errors import ScalarKindError

from conftest import dyadics


def test_canonical_form_reduces_exponent():
    d = Dyadic(1064, 9)
    assert (d.numerator, d.exponent) == (133, 6)
    assert Dyadic(0, 7).exponent == 0
    assert Dyadic(3, -2) == 12


def test_integers_keep_even_numerator():
    assert (Dyadic(8).numerator, Dyadic(8).exponent) == (8, 0)


def test_string_rendering():
    assert str(Dyadic(1064, 9)) == "133/64"
    assert str(Dyadic(-4)) == "-4"


def test_parse_and_fraction_roundtrip():
    assert Dyadic.parse("-9/16") == Fraction(-9, 16)
    with pytest.raises(ValueError):
        Dyadic.parse("1/3")


def test_float_conversion_is_exact():
    assert Dyadic.from_float(0.1).to_fraction() == Fraction(0.1)
    with pytest.raises(ValueError):
        Dyadic.from_float(float("inf"))


def test_mixing_with_float_is_refused():
    with pytest.raises(ScalarKindError):
        Dyadic(1, 1) + 0.5


def test_division_only_by_powers_of_two():
    assert Dyadic(3) / 4 == Fraction(3, 4)
    with pytest.raises(ValueError):
        Dyadic(3) / 3


def test_as_dyadic_accepts_common_inputs():
    assert as_dyadic("1/2") == as_dyadic(Fraction(1, 2)) == Dyadic(1, 1)
    assert as_dyadic(5) == 5
    assert ZERO == 0 and ONE == 1


@given(dyadics(), dyadics(), dyadics())
def test_ring_axioms_match_fraction(a, b, c):
    fa, fb, fc = a.to_fraction(), b.to_fraction(), c.to_fraction()
    assert (a + b) * c == (fa + fb) * fc
    assert a - b == fa - fb
    assert hash(a) == hash(fa)


@given(dyadics(), st.integers(-10, 10))
def test_scale2(a, k):
    assert a.scale2(k).to_fraction() == a.to_fraction() * Fraction(2) ** k


@given(dyadics(), dyadics())
def test_ordering_matches_fraction(a, b):
    assert (a < b) == (a.to_fraction() < b.to_fraction())
    assert (a <= b) == (a.to_fraction() <= b.to_fraction())
