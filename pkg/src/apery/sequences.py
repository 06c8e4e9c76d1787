"""Solutions of the recurrences attached to an operator, Apéry limits, and the
inhomogeneous constant linking an operator to a normal-function value."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebraic import AlgebraicNumber
from .diffop import DiffOperator
from .errors import DomainError, Obstructed
from .laurent import RationalSequence

__all__ = [
    "AperyLimitResult",
    "RationalRounding",
    "solve_homogeneous",
    "solve_inhomogeneous",
    "apery_limit",
    "inhomogeneous_constant",
    "normalize_thnf",
    "round_rational",
]


def _solve(L: DiffOperator, g, K, start, seed):
    polys = [L.P(i) for i in range(L.degree + 1)]

    def ev(p, x):
        acc = 0
        for c in reversed(p):
            acc = acc * x + c
        return acc

    out = [Fraction(0)] * (K + 1)
    for m in range(start, K + 1):
        acc = Fraction(g[m]) if m < len(g) else Fraction(0)
        for i in range(1, min(m, L.degree) + 1):
            if out[m - i]:
                acc -= ev(polys[i], m - i) * out[m - i]
        p0 = ev(polys[0], m)
        if m == start and seed is not None:
            if acc != 0:
                raise DomainError(f"recurrence is inconsistent at m={m}")
            out[m] = Fraction(seed)
            continue
        if p0 == 0:
            raise Obstructed(m)
        out[m] = acc / p0
    return RationalSequence(out)


def solve_homogeneous(L: DiffOperator, K: int) -> RationalSequence:
    """The solution ``a`` of ``L a = 0`` with ``a_0 = 1``, terms ``0..K``."""
    if L.P_eval(0, 0) != 0:
        raise DomainError("P_0(0) != 0: no power-series solution with a_0 = 1")
    return _solve(L, [], K, 0, 1)


def solve_inhomogeneous(L: DiffOperator, g, K: int) -> RationalSequence:
    """The solution of ``L b = g`` vanishing below the lowest degree of ``g``.

    ``g`` is a list of polynomial coefficients ``[g_0, g_1, ...]``.
    """
    g = [Fraction(c) for c in g]
    nz = [i for i, c in enumerate(g) if c]
    if not nz:
        return RationalSequence([0] * (K + 1))
    m0 = nz[0]
    return _solve(L, g, K, m0, None)


@dataclass(frozen=True)
class AperyLimitResult:
    value: object
    terms_used: int
    error_estimate: object
    convergence_ratio: object
    accelerated: bool = False


def apery_limit(a, b, precision: int = 256, window: int = 20) -> AperyLimitResult:
    """``lim b_k / a_k`` from exact prefixes, with a geometric tail estimate.

    The increments ``Delta_n = b_n/a_n - b_{n-1}/a_{n-1}`` are formed exactly. Their
    ratio over the last ``window`` steps gives ``rho``; when ``rho`` is stable to 1%
    the geometric tail ``Delta_K rho / (1 - rho)`` is added and reported as the
    acceleration.
    """
    a, b = RationalSequence(a), RationalSequence(b)
    if len(a) != len(b):
        raise DomainError("sequences must have equal length")
    if len(a) < window:
        raise DomainError(f"need at least {window} terms")
    if any(x == 0 for x in a):
        raise DomainError("a_k vanishes; the ratio is undefined")
    K = len(a) - 1
    with mpmath.workprec(precision + 32):
        last = mpmath.mpf(b[K].numerator * a[K].denominator) / (b[K].denominator * a[K].numerator) if b[K] else mpmath.mpf(0)
        incs = []
        for n in range(K - window, K + 1):
            d = (b[n] * a[n - 1] - b[n - 1] * a[n]) / (a[n] * a[n - 1])
            incs.append(mpmath.mpf(d.numerator) / d.denominator)
        if all(x == 0 for x in incs):
            with mpmath.workprec(precision):
                return AperyLimitResult(+last, K + 1, mpmath.mpf(0), mpmath.mpf(0))
        ratios = [incs[i + 1] / incs[i] for i in range(len(incs) - 1) if incs[i] != 0]
        rho = ratios[-1] if ratios else mpmath.mpf(0)
        stable = len(ratios) >= 2 and all(abs(x - rho) <= abs(rho) / 100 for x in ratios[-5:])
        tail_bound = abs(incs[-1]) * abs(rho) / (1 - abs(rho)) if abs(rho) < 1 else mpmath.inf
        value = last
        accelerated = False
        error = tail_bound
        if stable and abs(rho) < 1:
            value = last + incs[-1] * rho / (1 - rho)
            accelerated = True
            # the ratio itself still drifts like 1/n, so keep the correction's own size as bound
            drift = abs(ratios[-1] - ratios[-2]) if len(ratios) > 1 else abs(rho)
            error = abs(incs[-1]) * (drift + abs(rho) ** 2) / (1 - abs(rho)) ** 2
            error = max(error, mpmath.mpf(2) ** (-precision))
        with mpmath.workprec(precision):
            return AperyLimitResult(+value, K + 1, +error, +abs(rho), accelerated)


@dataclass(frozen=True)
class RationalRounding:
    value: Fraction
    distance: object
    gap: object
    certified: bool


def round_rational(x, uncertainty, max_den=10 ** 4, margin=10 ** 3) -> RationalRounding:
    """Nearest fraction with denominator ``<= max_den``, with a separation certificate.

    Any other fraction ``r/s`` with ``s <= max_den`` is at least ``1/(q*max_den)``
    from ``p/q``; the certificate requires that gap, less the observed distance, to
    exceed ``margin`` times the uncertainty.
    """
    x = mpmath.mpf(x)
    man, exp = x.man_exp
    approx = Fraction(int(man)) * Fraction(2) ** int(exp)
    p_q = approx.limit_denominator(max_den)
    dist = abs(x - mpmath.mpf(p_q.numerator) / p_q.denominator)
    gap = mpmath.mpf(1) / (p_q.denominator * max_den) - dist
    certified = gap >= margin * mpmath.mpf(uncertainty) and dist <= mpmath.mpf(uncertainty) * margin
    return RationalRounding(p_q, dist, gap, bool(certified))


def inhomogeneous_constant(L: DiffOperator, v, uncertainty=None):
    """``kappa = -sum_{i<d} P_i(d-1-i) v_{d-1-i}``: minus the ``t^(d-1)`` coefficient of ``L V``.

    Returns ``(kappa, rounding)``; ``rounding`` is None when no uncertainty is given.
    """
    d = L.degree
    if len(v) < d:
        raise DomainError(f"need {d} Taylor coefficients, got {len(v)}")
    kappa = -sum(_mp(Fraction(L.P_eval(i, d - 1 - i))) * _mp(v[d - 1 - i]) for i in range(d))
    rounding = None
    if uncertainty is not None:
        rounding = round_rational(kappa, uncertainty)
    return kappa, rounding


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, AlgebraicNumber):
        return x.to_complex()
    return x


def normalize_thnf(v, kappa, L: DiffOperator):
    """``(P_0(d-1) / kappa) * V`` termwise; ``kappa`` may be an AlgebraicNumber."""
    k = _mp(kappa)
    if k == 0:
        raise DomainError("kappa vanishes: the normal function is torsion")
    factor = _mp(Fraction(L.P_eval(0, L.degree - 1)))
    return [factor * _mp(x) / k for x in v]
