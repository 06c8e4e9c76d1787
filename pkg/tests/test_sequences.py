from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from apery.algebraic import AlgebraicNumber
from apery.casebook import evaluate_expression, get_case
from apery.diffop import DiffOperator
from apery.errors import DomainError, Obstructed
from apery.sequences import (
    apery_limit,
    inhomogeneous_constant,
    normalize_thnf,
    round_rational,
    solve_homogeneous,
    solve_inhomogeneous,
)

from properties import _shift_data, binomial_shift, check_shift_invariance, shifts

LIMITS = {
    "a3": "1/6 * zeta3", "a2": "1/5 * zeta2", "b3": "1/10 * zeta2", "v12": "1/6 * zeta3",
    "v10": "1/10 * zeta2", "v14": "1/7 * zeta2", "v16": "7/32 * zeta3", "v18": "1/3 * L_chi3_3",
}


def op(case):
    return get_case(case).expected_operator


def test_homogeneous_solution_is_apery():
    a = solve_homogeneous(op("a3"), 30)
    assert list(a) == [sum(comb(k, j) ** 2 * comb(k + j, j) ** 2 for j in range(k + 1)) for k in range(31)]


def test_inhomogeneous_prefix():
    b = solve_inhomogeneous(op("a3"), [0, 1], 3)
    assert list(b) == [0, 1, Fraction(117, 8), Fraction(62531, 216)]
    b2 = solve_inhomogeneous(op("a2"), [0, 1], 2)
    assert list(b2) == [0, 1, Fraction(25, 4)]
    assert list(solve_inhomogeneous(op("a2"), [0, 0], 3)) == [0, 0, 0, 0]


def test_obstructed_and_domain_errors():
    with pytest.raises(Obstructed) as info:
        solve_homogeneous(DiffOperator.parse("D^2 - 2 * D - t"), 5)
    assert info.value.m == 2
    with pytest.raises(DomainError):
        solve_homogeneous(DiffOperator.parse("D + 1 - t"), 5)
    with pytest.raises(DomainError):
        apery_limit([1] * 10, [1] * 10)
    with pytest.raises(DomainError):
        apery_limit([1] * 30, [1] * 29)
    with pytest.raises(DomainError):
        apery_limit([0] * 30, [1] * 30)


@pytest.mark.parametrize("case", sorted(LIMITS))
def test_limits(case):
    L = op(case)
    a, b = solve_homogeneous(L, 199), solve_inhomogeneous(L, [0, 1], 199)
    with mpmath.workprec(256):
        res = apery_limit(a, b, 256)
        want = evaluate_expression(LIMITS[case], 256)
        assert abs(res.value - want) < mpmath.mpf(10) ** -60
        assert res.error_estimate < mpmath.mpf(10) ** -50
        assert res.terms_used == 200


def test_convergence_ratio_matches_singularities():
    L = op("a3")
    a, b = solve_homogeneous(L, 150), solve_inhomogeneous(L, [0, 1], 150)
    res = apery_limit(a, b, 256)
    with mpmath.workprec(256):
        rho = (17 - 12 * mpmath.sqrt(2)) / (17 + 12 * mpmath.sqrt(2))
        assert abs(res.convergence_ratio - rho) < 1e-3 * rho
        assert res.accelerated


def test_round_rational():
    r = round_rational(mpmath.mpf(10) + mpmath.mpf(10) ** -40, mpmath.mpf(10) ** -35)
    assert r.value == 10 and r.certified
    r = round_rational(mpmath.mpf(1) / 3, mpmath.mpf(10) ** -30)
    assert r.value == Fraction(1, 3) and r.certified
    loose = round_rational(mpmath.mpf("10.001"), mpmath.mpf("0.01"))
    assert not loose.certified


def test_inhomogeneous_constant_from_closed_forms():
    with mpmath.workprec(256):
        for case, v, kappa in [("v10", ["zeta2", "-10 + 6 * zeta2"], 10),
                               ("v12", ["2 * zeta3", "-12 + 10 * zeta3"], 12),
                               ("v14", ["zeta2", "-7 + 4 * zeta2"], 7)]:
            vals = [evaluate_expression(e, 256) for e in v]
            k, r = inhomogeneous_constant(op(case), vals, mpmath.mpf(10) ** -70)
            assert abs(k - kappa) < mpmath.mpf(10) ** -70
            assert r.value == kappa and r.certified
        with pytest.raises(DomainError):
            inhomogeneous_constant(op("v10"), [1])


def test_normalize_thnf():
    with mpmath.workprec(256):
        z3 = evaluate_expression("zeta3", 256)
        assert abs(normalize_thnf([7 * z3], 32, op("v16"))[0] - 7 * z3 / 32) < mpmath.mpf(10) ** -70
        v = normalize_thnf([evaluate_expression("4/27 * pi**3 * i", 256)], AlgebraicNumber.parse("9*sqrt(-3)"), op("v18"))[0]
        assert abs(v - evaluate_expression("1/3 * L_chi3_3", 256)) < mpmath.mpf(10) ** -70
        with pytest.raises(DomainError):
            normalize_thnf([1], 0, op("v16"))


def test_shift_invariance_against_laurent_shift():
    phi = get_case("v12").phi
    from apery.laurent import constant_term_sequence
    from properties import binomial_shift

    a = solve_homogeneous(op("v12"), 6)
    assert binomial_shift(list(a), 2) == list(constant_term_sequence(phi.shift(2), 6))


@settings(max_examples=30)
@given(shifts())
def test_limit_shift_invariance(data):
    check_shift_invariance(*data)


def test_shift_past_midpoint_changes_the_limit():
    # for a2 the growth rates are 11.09 and -0.09; at c = -8 the second dominates
    a, b, alpha, _ = _shift_data("a2")
    a2, b2 = binomial_shift(a[:200], -8), binomial_shift(b[:200], -8)
    ratios = [b2[k] / a2[k] for k in (100, 199)]
    assert all(abs(float(r) - float(alpha)) > 2 for r in ratios)
    # while inside the range the same construction converges to alpha
    check_shift_invariance("a2", -4)
