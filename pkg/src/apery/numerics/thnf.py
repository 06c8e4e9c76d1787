"""Taylor coefficients ``v_k`` of truncated higher normal functions, evaluated from
their iterated-integral representations, and the closed-form values ``V(0)``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from ..errors import DomainError
from ..laurent import LaurentPolynomial, partial_constant_term
from .polylog import polylog
from .quadrature import IntegrationRegion, integrate_1d, tanh_sinh_integrate

__all__ = [
    "ThnfValue",
    "thnf_coefficient",
    "thnf_value_at_zero",
    "log_square_integral",
    "v18_antiderivative_difference",
    "v18_contour_integral",
    "REGIONS",
]


@dataclass(frozen=True)
class ThnfValue:
    value: object
    error: object
    method: str
    prec: int


class _SlicedLaurent:
    """``P(x_outer, x_inner) / x_outer`` as a nested integrand.

    ``partial(x_outer)`` collapses ``P`` to a polynomial in the inner variable with
    numeric coefficients. Both steps run with extra bits: near ``x_outer = 0`` the
    coefficients grow like ``x_outer^-k``, and near ``x_outer = 1`` the inner range
    reaches down to ``(1 - x_outer)^2`` where negative inner powers blow up; in both
    cases the terms cancel against each other.
    """

    def __init__(self, poly: LaurentPolynomial, outer: int, inner: int):
        self.by_inner = {}
        for m, c in poly.terms.items():
            self.by_inner.setdefault(m[inner], []).append((m[outer] - 1, c.numerator, c.denominator))
        exps = [e for m in poly.terms for e in (m[outer], m[inner])] or [0]
        self.depth = max(0, -min(exps)) + 1

    def _extra(self, x):
        if not 0 < x < 1:
            raise DomainError("outer coordinate must lie in (0, 1)")
        lost = -float(mpmath.log(x, 2)) - float(mpmath.log(1 - x, 2))
        return int(2 * self.depth * lost) + 32

    def partial(self, x_outer):
        extra = self._extra(x_outer)
        with mpmath.workprec(mpmath.mp.prec + extra):
            coeffs = {}
            for j, items in self.by_inner.items():
                coeffs[j] = mpmath.fsum(mpmath.mpf(p) / q * x_outer ** e for e, p, q in items)

        def g(x_inner):
            with mpmath.workprec(mpmath.mp.prec + extra):
                total = mpmath.fsum(c * x_inner ** j for j, c in coeffs.items())
            return +total

        return g

    def __call__(self, x_outer, x_inner):
        return self.partial(x_outer)(x_inner)


def _region_v10():
    # x2 in [0,1], x1 in [1-x2, 1], measure dx1/x1 dx2/x2
    return IntegrationRegion(((0, 1), (lambda x2: 1 - x2, 1)), "graph-bounded", "mu_v10", (False, True))


def _region_v14():
    # x3 in [0,1], x2 in [(1-x3)^2, 1-x3], measure dx2/x2 dx3/x3
    return IntegrationRegion(((0, 1), (lambda x3: (1 - x3) ** 2, lambda x3: 1 - x3)), "graph-bounded", "mu_v14", (False, True))


REGIONS = {"mu_v10": _region_v10, "mu_v14": _region_v14, "cube3": lambda: IntegrationRegion.cube(3), "cube2": lambda: IntegrationRegion.cube(2)}

# (variable removed by the partial constant term, outer variable, inner variable)
# indices refer to the remaining variables after removal
_SLICES = {
    "v10": (2, 1, 0, "mu_v10"),  # drop x3; remaining (x1, x2); outer x2, inner x1
    "v14": (0, 1, 0, "mu_v14"),  # drop x1; remaining (x2, x3); outer x3, inner x2
}


def _case_phi(case_id):
    from ..casebook import get_case

    return get_case(case_id).phi


# int_0^1 X^k (1-X)^k / (1 - (1-w) X)^(k+1) dX = (A_k(w) log w + B_k(w)) / (c_k (w-1)^(2k+1)),
# coefficient lists low degree first
_V12_INNER = {
    0: ([1], [0], 1),
    1: ([1, 1], [2, -2], 1),
    2: ([1, 4, 1], [3, 0, -3], 1),
    3: ([3, 27, 27, 3], [11, 27, -27, -11], 3),
}


def _v12_inner(k):
    """``w -> int_0^1 X^k (1-X)^k / (1 - (1-w) X)^(k+1) dX``, exact in ``X``.

    The closed form cancels to order ``(1-w)^(2k+1)`` near ``w = 1``, so it is
    evaluated with that many extra bits; at ``w`` within rounding of 1 the
    value ``B(k+1, k+1)`` is used.
    """
    A, B, c = _V12_INNER[k]
    beta = mpmath.beta(k + 1, k + 1)

    def poly(p, w):
        acc = 0
        for a in reversed(p):
            acc = acc * w + a
        return acc

    def inner(w):
        prec = mpmath.mp.prec
        d = 1 - w
        if d == 0:
            return beta
        lost = (2 * k + 2) * max(0.0, -float(mpmath.log(abs(d), 2)))
        lost += max(0.0, -float(mpmath.log(w, 2)))
        if lost > 4 * prec:
            return beta
        with mpmath.workprec(prec + int(lost) + 16):
            val = (poly(A, w) * mpmath.log(w) + poly(B, w)) / (c * (w - 1) ** (2 * k + 1))
        return +val

    return inner


def _v12_integrand_2d(k):
    inner = _v12_inner(k)

    def f(x1, x2):
        return (x1 * (1 - x1) * x2 * (1 - x2)) ** k * inner(x1 * x2)

    return f


def _v12_integrand_3d(k, bits):
    """Outer integrand over ``(x1, x2)`` whose value is the third integral done by
    quadrature, in ``y = 1 - x3`` so that the peak of width ``e = x1 x2`` sits at
    ``y = 0``. The ``y`` range is split at ``e``: ``y = e z`` on ``[0, e]`` and
    ``y = exp(s)`` on ``[e, 1]``, which leaves both pieces smooth."""

    def f(x1, x2):
        e = x1 * x2
        w = (x1 * (1 - x1) * x2 * (1 - x2)) ** k

        def g(y):
            return (y * (1 - y)) ** k / (y + (1 - y) * e) ** (k + 1)

        prec = mpmath.mp.prec
        if e == 0:
            return mpmath.mpf(0)
        near = integrate_1d(lambda z: e * g(e * z), 0, 1, bits, prec)
        far = integrate_1d(lambda t: g(mpmath.exp(t)) * mpmath.exp(t), mpmath.log(e), 0, bits, prec)
        return w * (near.value + far.value)

    return f


@lru_cache(maxsize=128)
def _thnf_cached(case_id, k, digits, prec, method):
    with mpmath.workprec(prec):
        if case_id in _SLICES:
            drop, outer, inner, region = _SLICES[case_id]
            poly = partial_constant_term(_case_phi(case_id), k, drop)
            res = tanh_sinh_integrate(_SlicedLaurent(poly, outer, inner), REGIONS[region](), digits, prec)
            return ThnfValue(res.value, res.error, f"quadrature-2d:{region}", prec)
        if case_id == "v12":
            if method == "quadrature-3d":
                bits = int(digits * math.log2(10)) + 32
                res = tanh_sinh_integrate(_v12_integrand_3d(k, bits), IntegrationRegion.cube(2), digits, prec)
                return ThnfValue(res.value, res.error, "quadrature-3d:cube3", prec)
            res = tanh_sinh_integrate(_v12_integrand_2d(k), IntegrationRegion.cube(2), digits, prec)
            return ThnfValue(res.value, res.error, "quadrature-2d:cube2+exact-inner", prec)
    raise DomainError(f"no coefficient integral registered for case {case_id!r}")


def thnf_coefficient(case_id: str, k: int, digits: int = 30, prec: int | None = None, method: str | None = None) -> ThnfValue:
    """``v_k`` for ``v10``, ``v12`` or ``v14`` with ``0 <= k <= 3``.

    ``v10``/``v14`` integrate the exact partial constant term of ``phi^k`` over
    the case's region with logarithmic measure; ``v12`` integrates its rational
    integrand over the cube, with the innermost variable done in closed form
    unless ``method="quadrature-3d"``.
    """
    if case_id not in ("v10", "v12", "v14"):
        raise DomainError(f"no coefficient integral registered for case {case_id!r}")
    if not 0 <= k <= 3:
        raise DomainError("coefficients are available for 0 <= k <= 3")
    if prec is None:
        prec = max(mpmath.mp.prec, int(digits * 3.33) + 64)
    return _thnf_cached(case_id, k, int(digits), int(prec), method)


def log_square_integral(digits: int = 30, prec: int | None = None):
    """``4 int_0^1 log(u)^2 / (1 - u^2) du``."""
    prec = prec or max(mpmath.mp.prec, int(digits * 3.33) + 64)
    bits = int(digits * math.log2(10)) + 1
    with mpmath.workprec(prec):
        res = integrate_1d(lambda u: mpmath.log(u) ** 2 / (1 - u * u), 0, 1, bits, prec + 16)
        return ThnfValue(4 * res.value, 4 * res.error, "quadrature-1d", prec)


def _v18_F(u, prec):
    lg = mpmath.log(u)
    return 4 * polylog(3, u, prec) - 4 * polylog(2, u, prec) * lg + lg ** 3 / 3


def v18_antiderivative_difference(prec: int = 256):
    """``[4 Li_3(u) - 4 Li_2(u) log u + log(u)^3 / 3]`` from ``e^(-i pi/3)`` to ``e^(i pi/3)``."""
    with mpmath.workprec(prec + 32):
        top = mpmath.expjpi(mpmath.mpf(1) / 3)
        bottom = mpmath.expjpi(mpmath.mpf(-1) / 3)
        val = _v18_F(top, prec + 32) - _v18_F(bottom, prec + 32)
    with mpmath.workprec(prec):
        return +val


def v18_contour_integral(digits: int = 30, prec: int | None = None):
    """The same value as a path integral of ``(4 log(1-u) + log u) log u du/u`` on
    ``u = e^(i theta)``, ``theta`` in ``[-pi/3, pi/3]``."""
    prec = prec or max(mpmath.mp.prec, int(digits * 3.33) + 64)
    bits = int(digits * math.log2(10)) + 1
    with mpmath.workprec(prec):
        def f(theta):
            u = mpmath.expj(theta)
            lg = mpmath.mpc(0, theta)
            return (4 * mpmath.log(1 - u) + lg) * lg * mpmath.j

        # log(1 - u) is singular at theta = 0, so that point is kept as an endpoint
        left = integrate_1d(f, -mpmath.pi / 3, 0, bits, prec + 16)
        right = integrate_1d(f, 0, mpmath.pi / 3, bits, prec + 16)
        return ThnfValue(left.value + right.value, left.error + right.error, "contour-1d", prec)


def thnf_value_at_zero(case_id: str, digits: int = 30, prec: int | None = None) -> ThnfValue:
    """``V(0)`` for every case with a registered representation."""
    prec = prec or max(mpmath.mp.prec, int(digits * 3.33) + 64)
    if case_id == "v16":
        return log_square_integral(digits, prec)
    if case_id == "v18":
        val = v18_antiderivative_difference(prec)
        return ThnfValue(val, mpmath.ldexp(1, -prec + 8), "closed-form-1d:polylog", prec)
    return thnf_coefficient(case_id, 0, digits, prec)
