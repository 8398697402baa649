from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quartic import catalog
from quartic.curve import TernaryQuartic, parse_rational
from quartic.errors import SingularCurveError
from quartic.kernel.poly import MPoly

x, y, z = MPoly.gens()
coefficient_lists = st.lists(st.fractions(min_value=-1000, max_value=1000, max_denominator=50),
                             min_size=15, max_size=15).filter(any)


def test_parse_rational_forms():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational(" 7 ") == 7
    for bad in ("1.5", "2/", "abc", "1/-2"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_from_string_with_prefix():
    f = TernaryQuartic.from_string("quartic: 1 0 0 0 0 0 0 0 0 0 1 0 0 0 1")
    assert f == catalog.FERMAT


def test_wrong_length_rejected():
    with pytest.raises(ValueError, match="15"):
        TernaryQuartic.from_string("1 2 3")


def test_zero_rejected():
    with pytest.raises(ValueError):
        TernaryQuartic((0,) * 15)


def test_coefficient_order():
    f = TernaryQuartic.from_poly(3 * x**3 * y - 5 * y * z**3)
    assert f.coefficients[1] == 3 and f.coefficients[13] == -5
    assert f.coefficient(3, 1, 0) == 3


@given(coefficient_lists)
def test_string_roundtrip(coeffs):
    f = TernaryQuartic(tuple(coeffs))
    assert TernaryQuartic.from_string(" ".join(str(c) for c in f.coefficients)) == f


@given(coefficient_lists)
def test_poly_roundtrip(coeffs):
    f = TernaryQuartic(tuple(coeffs))
    assert TernaryQuartic.from_poly(f.poly) == f


def test_transform_by_permutation():
    f = TernaryQuartic.from_poly(x**4 + 2 * y**4 + 3 * z**4)
    swapped = f.transform([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert swapped == TernaryQuartic.from_poly(2 * x**4 + y**4 + 3 * z**4)


def test_fermat_discriminant_pinned():
    # reference normalization of the discriminant
    assert catalog.FERMAT.discriminant() == 4**27


def test_singular_quartic_is_rejected():
    with pytest.raises(SingularCurveError):
        TernaryQuartic.from_poly(x**4 + y**4).ensure_smooth()
