"""Precision-tagged numbers and named constants, each computed by two routes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import mpmath

__all__ = ["BigReal", "ConsistencyError", "named_constant", "CONSTANT_NAMES"]


class ConsistencyError(ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""


@dataclass(frozen=True)
class BigReal:
    """An mpmath value (real or complex) together with the precision it is good to.

    Arithmetic takes the smaller precision of its operands.
    """

    value: object
    prec: int
    provenance: str = "exact-cast"

    @classmethod
    def of(cls, x, prec=None, provenance="exact-cast"):
        if isinstance(x, BigReal):
            return x
        prec = prec or mpmath.mp.prec
        if isinstance(x, Fraction):
            with mpmath.workprec(prec):
                x = mpmath.mpf(x.numerator) / x.denominator
        return cls(mpmath.mpmathify(x), prec, provenance)

    def _bin(self, other, op):
        other = BigReal.of(other, self.prec)
        prec = min(self.prec, other.prec)
        with mpmath.workprec(prec):
            return BigReal(op(self.value, other.value), prec, "arith")

    def __add__(self, o):
        return self._bin(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, o):
        return self._bin(o, lambda a, b: a - b)

    def __rsub__(self, o):
        return self._bin(o, lambda a, b: b - a)

    def __mul__(self, o):
        return self._bin(o, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._bin(o, lambda a, b: a / b)

    def __rtruediv__(self, o):
        return self._bin(o, lambda a, b: b / a)

    def __neg__(self):
        return BigReal(-self.value, self.prec, self.provenance)

    def __abs__(self):
        return BigReal(abs(self.value), self.prec, self.provenance)

    @property
    def real(self):
        return BigReal(mpmath.re(self.value), self.prec, self.provenance)

    @property
    def imag(self):
        return BigReal(mpmath.im(self.value), self.prec, self.provenance)

    def __float__(self):
        return float(self.value)

    def digits(self):
        return int(self.prec * 0.30103)

    def __str__(self):
        return mpmath.nstr(self.value, self.digits())


def _binom_series(sign, power, scale, prec):
    """``scale * sum_{n>=1} sign^(n-1) / (n^power * C(2n, n))`` by exact rational recursion."""
    one = 1 << (prec + 16)
    total = 0
    # term_n = 1/C(2n,n) scaled; C(2n,n) = C(2n-2,n-1) * (2n)(2n-1)/n^2
    inv = Fraction(1, 2)
    n = 1
    while True:
        t = (one * inv.numerator) // (inv.denominator * n ** power)
        if t == 0:
            break
        total += t if (sign > 0 or n % 2 == 1) else -t
        n += 1
        inv = inv * Fraction(n * n, (2 * n) * (2 * n - 1))
    with mpmath.workprec(prec + 16):
        return mpmath.mpf(total) * scale / one


def _zeta2_series(prec):
    # zeta(2) = 3 * sum 1/(n^2 C(2n,n))
    return _binom_series(1, 2, 3, prec)


def _zeta3_series(prec):
    # zeta(3) = 5/2 * sum (-1)^(n-1)/(n^3 C(2n,n))
    return _binom_series(-1, 3, mpmath.mpf(5) / 2, prec)


def _log2_series(prec):
    one = 1 << (prec + 16)
    total, k = 0, 1
    while True:
        t = one // (k << k)
        if t == 0:
            break
        total += t
        k += 1
    with mpmath.workprec(prec + 16):
        return mpmath.mpf(total) / one


def _sqrt_int(n, prec):
    shift = 2 * (prec + 16)
    root = isqrt(n << shift)
    with mpmath.workprec(prec + 16):
        return mpmath.ldexp(mpmath.mpf(root), -(prec + 16))


def _lchi3_hurwitz(prec):
    with mpmath.workprec(prec + 16):
        third = mpmath.mpf(1) / 3
        return (mpmath.zeta(3, third) - mpmath.zeta(3, 2 * third)) / 27


def _routes(name, prec):
    """Two independent evaluations of a named constant."""
    mp = mpmath
    if name == "zeta2":
        return _zeta2_series(prec), mp.zeta(2)
    if name == "zeta3":
        return _zeta3_series(prec), mp.zeta(3)
    if name == "pi":
        return mp.sqrt(6 * _zeta2_series(prec)), +mp.pi
    if name == "log2":
        return _log2_series(prec), mp.log(2)
    if name == "L_chi3_3":
        return 4 * mp.pi ** 3 / (81 * _sqrt_int(3, prec)), _lchi3_hurwitz(prec)
    if name == "pi3_sqrt3":
        return mp.pi ** 3 / _sqrt_int(3, prec), mp.sqrt(mp.mpf(2) * _zeta2_series(prec) * 3) ** 3 / mp.sqrt(3)
    if name.startswith("sqrt(") and name.endswith(")"):
        n = int(name[5:-1])
        if n < 0:
            raise ValueError("negative radicand")
        return _sqrt_int(n, prec), mp.sqrt(n)
    raise KeyError(f"unknown constant {name!r}")


CONSTANT_NAMES = ("zeta2", "zeta3", "pi", "log2", "L_chi3_3", "pi3_sqrt3")


@lru_cache(maxsize=256)
def _named(name, prec):
    with mpmath.workprec(prec + 16):
        a, b = _routes(name, prec)
        a, b = +a, +b
    with mpmath.workprec(prec):
        a, b = +a, +b
        if abs(a - b) > 4 * mpmath.ldexp(abs(b), -prec):
            raise ConsistencyError(f"{name}: evaluations disagree ({mpmath.nstr(a, 20)} vs {mpmath.nstr(b, 20)})")
    return b


def named_constant(name: str, prec: int = 256) -> BigReal:
    return BigReal(_named(name, int(prec)), int(prec), "two-route")
