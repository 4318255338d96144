from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from randassign.rational import Rat, decimal_str, parse_rat, rat_str

nonzero = st.integers(min_value=1, max_value=10**12)
signed = st.integers(min_value=-(10**12), max_value=10**12)


@given(a=signed, b=nonzero, c=signed, d=nonzero)
def test_addition_matches_integer_cross_multiplication(a, b, c, d):
    total = Rat(a, b) + Rat(c, d)
    assert total.numerator * (b * d) == (a * d + c * b) * total.denominator


@given(a=signed, b=nonzero, c=signed, d=nonzero)
def test_multiplication_matches_integer_cross_multiplication(a, b, c, d):
    product = Rat(a, b) * Rat(c, d)
    assert product.numerator * (b * d) == (a * c) * product.denominator


@given(a=signed, b=nonzero)
def test_reduction_to_lowest_terms(a, b):
    x = Rat(a, b)
    assert Fraction(int(x.numerator), int(x.denominator)) == Fraction(a, b)


def test_rat_str_matches_fraction_rendering():
    assert rat_str(Rat(5, 12)) == "5/12"
    assert rat_str(Rat(6, 4)) == "3/2"
    assert rat_str(Rat(0)) == "0"
    assert rat_str(Rat(2, 1)) == "2"


def test_parse_rat_roundtrip():
    for text in ("11/24", "1", "0", "5/12"):
        assert rat_str(parse_rat(text)) == text


def test_decimal_str_exact_rounding():
    assert decimal_str(Rat(1, 3), 6) == "0.333333"
    assert decimal_str(Rat(2, 3), 6) == "0.666667"
    assert decimal_str(Rat(1), 6) == "1.000000"
    assert decimal_str(Rat(0), 6) == "0.000000"
    assert decimal_str(Rat(1, 2), 1) == "0.5"
    assert decimal_str(Rat(953, 1000), 6) == "0.953000"


@given(a=st.integers(min_value=0, max_value=10**9), b=nonzero)
def test_decimal_str_matches_fraction_quantization(a, b):
    rendered = decimal_str(Rat(a, b), 6)
    reparsed = Fraction(rendered)
    assert abs(reparsed - Fraction(a, b)) <= Fraction(1, 2 * 10**6)
