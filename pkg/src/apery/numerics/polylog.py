"""Polylogarithms ``Li_2`` and ``Li_3`` on the closed unit disc.

Inside ``|z| <= 1/2`` the defining series is summed directly. Elsewhere on the
disc the expansion in ``mu = log z``

    Li_n(e^mu) = mu^(n-1)/(n-1)! * (H_(n-1) - log(-mu)) + sum_{k != n-1} zeta(n-k) mu^k / k!

is used; it converges for ``|mu| < 2 pi``, which covers ``1/2 <= |z| <= 1``
(including the unit circle) and selects the principal branch.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import DomainError
from .constants import named_constant

__all__ = ["polylog"]


def _direct(n, z, prec):
    total = mpmath.mpc(0) if isinstance(z, mpmath.mpc) else mpmath.mpf(0)
    power = z
    eps = mpmath.ldexp(1, -prec - 8)
    k = 1
    while True:
        term = power / mpmath.mpf(k) ** n
        total += term
        if abs(power) < eps:
            break
        k += 1
        power *= z
    return total


def _zeta_int(s, prec):
    """zeta at an integer ``s != 1``."""
    if s == 2:
        return named_constant("zeta2", prec).value
    if s == 3:
        return named_constant("zeta3", prec).value
    if s == 0:
        return mpmath.mpf(-1) / 2
    if s < 0:
        m = -s
        if m % 2 == 0:
            return mpmath.mpf(0)
        b = mpmath.bernfrac(m + 1)
        return (-1) ** m * mpmath.mpf(b[0]) / b[1] / (m + 1)
    return mpmath.zeta(s)


def _log_series(n, z, prec):
    mu = mpmath.log(z)
    if mu == 0:
        return _zeta_int(n, prec)
    harmonic = sum(Fraction(1, j) for j in range(1, n))
    head = mu ** (n - 1) / mpmath.factorial(n - 1) * (mpmath.mpf(harmonic.numerator) / harmonic.denominator - mpmath.log(-mu))
    total = head
    eps = mpmath.ldexp(1, -prec - 8)
    power = mpmath.mpf(1)
    k = 0
    small = 0
    while True:
        if k != n - 1:
            zk = _zeta_int(n - k, prec)
            term = zk * power
            total += term
            if k > n and zk != 0:
                small = small + 1 if abs(term) < eps else 0
                if small >= 2:
                    break
        k += 1
        power = power * mu / k
    return total


def polylog(n: int, z, prec: int = 256):
    """``Li_n(z) = sum_{k>=1} z^k / k^n`` for ``n`` in {2, 3} and ``|z| <= 1``."""
    if n not in (2, 3):
        raise DomainError("only Li_2 and Li_3 are implemented")
    with mpmath.workprec(prec + 32):
        z = mpmath.mpmathify(z)
        r = abs(z)
        if r > 1 + mpmath.ldexp(1, -prec):
            raise DomainError("argument outside the closed unit disc")
        if z == 0:
            return mpmath.mpf(0)
        if r <= 0.5:
            val = _direct(n, z, prec + 32)
        else:
            val = _log_series(n, z, prec + 32)
        if isinstance(val, mpmath.mpc) and not isinstance(z, mpmath.mpc) and z <= 1:
            val = mpmath.re(val)
    with mpmath.workprec(prec):
        return +val
