from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from apery.algebraic import AlgebraicNumber
from apery.casebook import get_case
from apery.diffop import (
    DiffOperator,
    WeylOperator,
    apply_to_series,
    fl_transform_operator,
    local_exponents,
    regularize_sequence,
    singular_locus,
    stirling2,
    to_recurrence,
)
from apery.errors import DomainError
from apery.sequences import solve_homogeneous

from properties import check_fl_consistency, check_operator_recurrence_roundtrip, mum_operators

t, D = sympy.symbols("t D")
A3 = DiffOperator.from_sympy(D ** 3 - t * (2 * D + 1) * (17 * D ** 2 + 17 * D + 5) + t ** 2 * (D + 1) ** 3, t, D)


def test_parse_and_print_roundtrip():
    L = DiffOperator.parse("D^3 - 5*t - 27 * t * D + 1/2 * t^2 * D^3")
    assert L.beta[1][1] == -27 and L.beta[2][3] == Fraction(1, 2)
    assert DiffOperator.parse(L.to_text()) == L
    assert DiffOperator.parse(A3.to_text()) == A3
    assert str(DiffOperator.parse("D")) == "D"


@pytest.mark.parametrize("bad", ["", "D^3 + x", "3 ** t", "D^"])
def test_parse_errors(bad):
    with pytest.raises(DomainError):
        DiffOperator.parse(bad)


def test_shape():
    assert (A3.order, A3.degree) == (3, 2)
    assert A3.P(0) == [0, 0, 0, 1]
    assert A3.P(5) == []
    assert A3.leading_polynomial() == [1, -34, 1]


def test_composition_normal_order():
    Dop = DiffOperator.parse("D")
    top = DiffOperator.parse("t")
    # D t = t (D + 1)
    assert Dop * top == DiffOperator.parse("t * D + t")
    assert top * Dop == DiffOperator.parse("t * D")
    assert (Dop * top) - (top * Dop) == top


def test_dt_form():
    # D^2 = t^2 d^2 + t d
    assert DiffOperator.parse("D^2").dt_form() == [[], [0, 1], [0, 0, 1]]
    assert stirling2(3, 2) == 3 and stirling2(4, 2) == 7


def test_weyl_composition_matches():
    L1 = DiffOperator.parse("D^2 - t * D")
    L2 = DiffOperator.parse("t + D")
    assert (L1.to_weyl() * L2.to_weyl()).to_diffop() == L1 * L2


def test_involution_of_apery_operator():
    assert A3.involution() == -A3
    assert A3.involution().involution() == A3


def test_fl_transform_basic():
    # D -> -s d/ds - 1 and t -> d/ds
    assert fl_transform_operator(DiffOperator.parse("D")) == WeylOperator({(1, 1): -1, (0, 0): -1})
    assert fl_transform_operator(DiffOperator.parse("t")) == WeylOperator({(0, 1): 1})


def test_regularize_roundtrip():
    u = [Fraction(k * k + 1) for k in range(8)]
    assert list(regularize_sequence(regularize_sequence(u), "inverse")) == u
    with pytest.raises(DomainError):
        regularize_sequence(u, "sideways")


def test_apply_matches_sympy_series():
    u = [Fraction(k + 1, k + 2) for k in range(10)]
    series = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(u))
    theta = lambda f: sympy.expand(t * sympy.diff(f, t))
    want = theta(theta(series)) - t * theta(series) - 3 * t ** 2 * series
    got = apply_to_series(DiffOperator.parse("D^2 - t * D - 3 * t^2"), u)
    poly = sympy.Poly(want, t)
    for k in range(10):
        c = poly.coeff_monomial(t ** k)
        assert got[k] == Fraction(int(c.p), int(c.q))


def _values(pts):
    return sorted(p.value.to_complex(60).real for p in pts)


@pytest.mark.parametrize("case,expected", [
    ("a3", ["17-12*sqrt(2)", "17+12*sqrt(2)"]),
    ("b3", ["(-11+5*sqrt(5))/8", "(-11-5*sqrt(5))/8"]),
    ("v14", ["1/27", "-1"]),
    ("v16", ["3/4-sqrt(2)/2", "3/4+sqrt(2)/2"]),
    ("v18", ["-1/3+2*sqrt(3)/9", "-1/3-2*sqrt(3)/9"]),
])
def test_singular_locus(case, expected):
    pts = singular_locus(get_case(case).expected_operator)
    assert all(p.exact for p in pts)
    assert {p.value for p in pts} == {AlgebraicNumber.parse(e) for e in expected}
    assert pts[0].modulus < pts[1].modulus


def _rational_exponents(le):
    return sorted(Fraction(e.a) for e in le.exponents)


@pytest.mark.parametrize("case,at_inf", [
    ("v12", ["1", "1", "1"]), ("v16", ["1", "1", "1"]), ("v18", ["1", "1", "1"]),
    ("v10", ["1/2", "1", "3/2"]), ("v14", ["2/3", "1", "4/3"]),
])
def test_local_exponents(case, at_inf):
    L = get_case(case).expected_operator
    at0 = local_exponents(L, 0)
    assert at0.regular and _rational_exponents(at0) == [0, 0, 0]
    inf = local_exponents(L, "infinity")
    assert inf.regular and _rational_exponents(inf) == [Fraction(e) for e in at_inf]
    for p in singular_locus(L):
        le = local_exponents(L, p.value)
        assert le.regular
        assert _rational_exponents(le) == [0, Fraction(1, 2), 1]


def test_irregular_point_detected():
    L = DiffOperator.parse("D^2 - t")
    assert not local_exponents(L, "infinity").regular


@settings(max_examples=40)
@given(mum_operators(), st.lists(st.fractions(max_denominator=5).map(Fraction), min_size=6, max_size=10))
def test_operator_recurrence_roundtrip(L, u):
    check_operator_recurrence_roundtrip(L, u)


@settings(max_examples=40)
@given(mum_operators())
def test_fl_consistency(L):
    check_fl_consistency(L)


@settings(max_examples=30)
@given(mum_operators(), mum_operators())
def test_composition_acts_as_composition(L1, L2):
    u = solve_homogeneous(DiffOperator.parse("D - t"), 9)  # exp(t) coefficients
    assert list(apply_to_series(L1 * L2, u)) == list(apply_to_series(L1, apply_to_series(L2, u)))


@settings(max_examples=30)
@given(mum_operators())
def test_involution_is_an_involution(L):
    assert L.involution().involution() == L
