from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supertwist.superfields import Space, SuperPolynomial, SuperVectorField
from supertwist.syntax import ParseError, parse_field, parse_poly

SP = Space.standard(2, 2)


def test_monomial():
    p = parse_poly("z2")
    assert p == SuperPolynomial.var(p.space, "z2")


def test_rational_coefficients():
    p = parse_poly("z1^2*z2 + 3/2*z2^3")
    assert len(p.terms) == 2
    assert Fraction(3, 2) in p.terms.values()


def test_whitespace_insensitive():
    assert parse_poly(" z1 ^ 2 *z2+ 3 / 2*z2^3 ", SP) == parse_poly("z1^2*z2+3/2*z2^3", SP)


@pytest.mark.parametrize("text", ["z2^-1", "e1^2", "z1 +", "(z1", "z3 + q", "z1/z2", "2 $ z1"])
def test_rejections(text):
    with pytest.raises(ParseError):
        parse_poly(text)


def test_error_position():
    with pytest.raises(ParseError) as exc:
        parse_poly("z1 +\n  * z2")
    assert exc.value.line == 2 and exc.value.col == 3


def test_odd_variables_anticommute():
    assert parse_poly("e1*e2 + e2*e1", SP).is_zero()


def test_field_parse():
    X = parse_field("z1*z2*d/dz1 + e1*d/de1")
    assert str(X) == "z1*z2*d/dz1 + e1*d/de1"


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        o = tuple(sorted(draw(st.sets(st.integers(0, 1), max_size=2))))
        terms[(e, o)] = draw(coeff)
    return SuperPolynomial(SP, terms)


@given(polys())
def test_polynomial_round_trip(p):
    assert parse_poly(str(p), SP) == p


@given(polys(), polys())
def test_field_round_trip(p, q):
    X = SuperVectorField(SP, {"z1": p, "e2": q})
    assert parse_field(str(X), SP) == X
