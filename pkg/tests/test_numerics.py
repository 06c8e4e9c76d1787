from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from apery.errors import DomainError
from apery.numerics import constants as C
from apery.numerics.constants import BigReal, ConsistencyError, named_constant
from apery.numerics.polylog import polylog
from apery.numerics.quadrature import IntegrationRegion, QuadratureFailure, integrate_1d, tanh_sinh_integrate
from apery.numerics.thnf import (
    _v12_inner,
    log_square_integral,
    thnf_coefficient,
    thnf_value_at_zero,
    v18_antiderivative_difference,
    v18_contour_integral,
)

# published decimal expansions
REFERENCE = {
    "zeta2": "1.6449340668482264364724151666460251892189499012068",
    "zeta3": "1.2020569031595942853997381615114499907649862923405",
    "pi": "3.1415926535897932384626433832795028841971693993751",
    "log2": "0.69314718055994530941723212145817656807550013436026",
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_named_constants_reference_digits(name):
    v = named_constant(name, 200)
    with mpmath.workprec(200):
        assert abs(v.value - mpmath.mpf(REFERENCE[name])) < mpmath.mpf(10) ** -48
    assert v.prec == 200 and v.provenance == "two-route"


def test_l_chi3_dirichlet_series():
    # independent third route: sum chi_3(n)/n^3 with an alternating pairing
    with mpmath.workprec(120):
        direct = mpmath.nsum(lambda k: 1 / (3 * k + 1) ** 3 - 1 / (3 * k + 2) ** 3, [0, mpmath.inf])
        assert abs(named_constant("L_chi3_3", 120).value - direct) < mpmath.mpf(10) ** -30
        assert abs(named_constant("pi3_sqrt3", 120).value - mpmath.pi ** 3 / mpmath.sqrt(3)) < mpmath.mpf(10) ** -33


def test_sqrt_constant_and_unknown():
    with mpmath.workprec(100):
        assert abs(named_constant("sqrt(7)", 100).value ** 2 - 7) < mpmath.mpf(10) ** -28
    with pytest.raises(KeyError):
        named_constant("catalan", 64)


def test_route_disagreement_detected(monkeypatch):
    monkeypatch.setattr(C, "_routes", lambda name, prec: (mpmath.mpf(1), mpmath.mpf(1) + mpmath.mpf(10) ** -10))
    C._named.cache_clear()
    try:
        with pytest.raises(ConsistencyError):
            C._named("zeta2", 128)
    finally:
        C._named.cache_clear()


def test_bigreal_takes_minimum_precision():
    a = named_constant("zeta2", 300)
    b = BigReal.of(Fraction(1, 3), 100)
    s = a + b
    assert s.prec == 100
    assert (a * 2).prec == 300
    assert (1 - a).prec == 300
    assert abs(float(s) - (1.6449340668482264 + 1 / 3)) < 1e-15
    c = BigReal(mpmath.mpc(1, 2), 64)
    assert float(c.imag) == 2.0


def test_polylog_special_values():
    with mpmath.workprec(256):
        z2, z3 = named_constant("zeta2", 256).value, named_constant("zeta3", 256).value
        eps = mpmath.mpf(2) ** -240
        assert abs(polylog(2, 1, 256) - z2) < eps
        assert abs(polylog(3, 1, 256) - polylog(3, -1, 256) - mpmath.mpf(7) / 4 * z3) < eps
        assert polylog(2, 0) == 0 and polylog(3, 0) == 0
        assert abs(polylog(2, -1, 256) + z2 / 2) < eps


@pytest.mark.parametrize("z", [0.3, -0.45, 0.75, -0.99, 1j * 0.9, 0.6 + 0.6j, mpmath.expjpi(mpmath.mpf(1) / 3)])
def test_polylog_against_mpmath(z):
    with mpmath.workprec(200):
        for n in (2, 3):
            assert abs(polylog(n, z, 200) - mpmath.polylog(n, z)) < mpmath.mpf(2) ** -180


def test_polylog_domain():
    with pytest.raises(DomainError):
        polylog(2, 1.5)
    with pytest.raises(DomainError):
        polylog(4, 0.5)


@settings(max_examples=40)
@given(st.floats(0, 0.9), st.floats(0, 6.283))
def test_polylog_duplication(r, theta):
    with mpmath.workprec(160):
        z = mpmath.mpf(r) * mpmath.expj(mpmath.mpf(theta))
        for n in (2, 3):
            lhs = polylog(n, z * z, 160)
            rhs = 2 ** (n - 1) * (polylog(n, z, 160) + polylog(n, -z, 160))
            assert abs(lhs - rhs) < mpmath.mpf(2) ** -140


def test_quadrature_examples():
    with mpmath.workprec(200):
        z2 = named_constant("zeta2", 200).value
        z3 = named_constant("zeta3", 200).value
        r = integrate_1d(lambda x: -mpmath.log(1 - x) / x, 0, 1, 100, 200)
        assert abs(r.value - z2) < mpmath.mpf(10) ** -28 and r.error < 1e-25
        r = integrate_1d(lambda u: mpmath.log(u) ** 2 / (1 - u * u), 0, 1, 100, 200)
        assert abs(r.value - mpmath.mpf(7) / 4 * z3) < mpmath.mpf(10) ** -28
        r = tanh_sinh_integrate(lambda x: mpmath.mpf(1), IntegrationRegion.cube(1), 30)
        assert abs(r.value - 1) < mpmath.mpf(10) ** -30


def test_quadrature_precision_doubling_consistent():
    f = lambda x: mpmath.log(x) * mpmath.log(1 - x)
    lo = tanh_sinh_integrate(f, IntegrationRegion.cube(1), 20, 160)
    hi = tanh_sinh_integrate(f, IntegrationRegion.cube(1), 40, 256)
    with mpmath.workprec(256):
        assert abs(lo.value - hi.value) <= lo.error
        exact = 2 - named_constant("zeta2", 256).value
        assert abs(hi.value - exact) < mpmath.mpf(10) ** -38


def test_nested_regions():
    # triangle 0 <= x1 <= 1 - x2: area 1/2; with log inner axis: int int dx1/x1 over [1 - x2, 1] = zeta2
    tri = IntegrationRegion(((0, 1), (0, lambda x2: 1 - x2)))
    r = tanh_sinh_integrate(lambda x2, x1: mpmath.mpf(1), tri, 20, 128)
    assert abs(r.value - mpmath.mpf(1) / 2) < 1e-20
    mu = IntegrationRegion(((0, 1), (lambda x2: 1 - x2, 1)), log_axes=(False, True))
    r = tanh_sinh_integrate(lambda x2, x1: 1 / x2, mu, 20, 128)
    with mpmath.workprec(128):
        assert abs(r.value - mpmath.zeta(2)) < 1e-20


def test_quadrature_failure_and_domain():
    with pytest.raises(QuadratureFailure):
        integrate_1d(lambda x: 1 / x, 0, 1, 60, 128, max_level=5)
    with pytest.raises(DomainError):
        tanh_sinh_integrate(lambda *x: 1, IntegrationRegion.cube(4), 10)
    with pytest.raises(DomainError):
        tanh_sinh_integrate(lambda x: 1, IntegrationRegion.cube(1), 60, 64)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("w", ["0.1", "0.5", "0.9", "0.999"])
def test_v12_inner_closed_form_against_hypergeometric(k, w):
    with mpmath.workprec(128):
        w = mpmath.mpf(w)
        want = mpmath.beta(k + 1, k + 1) * mpmath.hyp2f1(k + 1, k + 1, 2 * k + 2, 1 - w)
        assert abs(_v12_inner(k)(w) - want) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("case,k,expr", [
    ("v10", 0, "zeta2"), ("v10", 1, "-10 + 6 * zeta2"), ("v12", 0, "2 * zeta3"),
    ("v12", 1, "-12 + 10 * zeta3"), ("v14", 0, "zeta2"), ("v14", 1, "-7 + 4 * zeta2"),
])
def test_thnf_coefficients(case, k, expr):
    from apery.casebook import evaluate_expression

    v = thnf_coefficient(case, k, digits=15)
    with mpmath.workprec(128):
        assert abs(v.value - evaluate_expression(expr, 128)) < mpmath.mpf(10) ** -12
    assert v.error < 1e-12


def test_v12_full_cube_cross_check():
    v = thnf_coefficient("v12", 0, digits=6, method="quadrature-3d")
    assert abs(v.value - 2 * mpmath.zeta(3)) < 1e-6
    assert v.method.startswith("quadrature-3d")


def test_thnf_domain():
    with pytest.raises(DomainError):
        thnf_coefficient("v16", 0)
    with pytest.raises(DomainError):
        thnf_coefficient("v10", 4)


def test_closed_form_values():
    with mpmath.workprec(256):
        z3 = named_constant("zeta3", 256).value
        r = log_square_integral(30)
        assert abs(r.value - 7 * z3) < mpmath.mpf(10) ** -28
        v = v18_antiderivative_difference(256)
        want = mpmath.mpc(0, 4 * mpmath.pi ** 3 / 27)
        assert abs(v - want) < mpmath.mpf(10) ** -70
        c = v18_contour_integral(30)
        assert abs(c.value - want) < mpmath.mpf(10) ** -28
        assert thnf_value_at_zero("v16", 20).method == "quadrature-1d"
