"""Nested tanh-sinh (double exponential) quadrature at arbitrary precision.

Nodes are parametrized by the fraction ``c = 1/(1 + exp(-pi sinh t))`` of the
interval, and points close to an endpoint are formed from the endpoint and the
small complement, so integrands with logarithmic endpoint singularities are
never evaluated past the endpoint by rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath

from ..errors import DomainError

__all__ = ["IntegrationRegion", "QuadratureResult", "QuadratureFailure", "tanh_sinh_integrate", "integrate_1d"]


class QuadratureFailure(ArithmeticError):
    """Successive refinement levels did not agree to the requested accuracy."""


@dataclass(frozen=True)
class IntegrationRegion:
    """Iterated region; ``bounds[0]`` is the outermost axis.

    Each bound is a number or a callable of the already fixed outer coordinates.
    Axes flagged in ``log_axes`` carry the measure ``dx/x`` and are integrated in
    ``y = log x``; the integrand then omits the ``1/x`` factor for that axis.
    """

    bounds: tuple
    kind: str = "graph-bounded"
    name: str = ""
    log_axes: tuple = ()

    def is_log(self, axis):
        return axis < len(self.log_axes) and bool(self.log_axes[axis])

    @classmethod
    def cube(cls, n):
        return cls(tuple((0, 1) for _ in range(n)), "cube", f"[0,1]^{n}")

    @property
    def dim(self):
        return len(self.bounds)

    def interval(self, axis, outer):
        lo, hi = self.bounds[axis]
        lo = lo(*outer) if callable(lo) else lo
        hi = hi(*outer) if callable(hi) else hi
        return lo, hi


@dataclass
class QuadratureResult:
    value: object
    error: object
    levels: int
    evaluations: int = 0
    history: list = field(default_factory=list)


@lru_cache(maxsize=64)
def _nodes(level, prec):
    """Nodes added at ``level``, as two tails ordered outward from ``t = 0``.

    Each node is ``(c, 1 - c, weight, right)`` per unit interval width, where
    ``right`` marks nodes closer to the right endpoint. Level 0 holds ``t = k``
    for integer ``k``; level ``l`` adds the odd multiples of ``2^-l``. Weights
    include the step. Tails stop where the endpoint distance underflows the
    working precision.
    """
    with mpmath.workprec(prec):
        h = mpmath.ldexp(1, -level)
        floor = mpmath.ldexp(1, -prec)
        tails = []
        for side in (1, -1):
            tail = []
            k = 1 if level > 0 else (0 if side == 1 else 1)
            while True:
                if level > 0 and k % 2 == 0:
                    k += 1
                    continue
                t = side * k * h
                s = mpmath.pi * mpmath.sinh(t)
                e = mpmath.exp(-abs(s))
                small = e / (1 + e)
                big = 1 / (1 + e)
                if small < floor:
                    break
                c, cc = (big, small) if s > 0 else (small, big)
                w = h * mpmath.pi * mpmath.cosh(t) * small * big
                tail.append((c, cc, w, bool(s > 0)))
                k += 1
            tails.append(tuple(tail))
        return tuple(tails)


def _point(a, b, node):
    c, cc, _, right = node
    width = b - a
    return b - width * cc if right else a + width * c


def integrate_1d(f, a, b, target_bits, prec=None, max_level=10, min_level=3):
    """``int_a^b f(x) dx``; stops when two successive levels agree to ``target_bits``.

    Each tail of nodes is summed outward until three consecutive contributions
    fall below the target tolerance.
    """
    prec = prec or mpmath.mp.prec
    with mpmath.workprec(prec):
        a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
        width = b - a
        if width == 0:
            return QuadratureResult(mpmath.mpf(0), mpmath.mpf(0), 0)
        total = 0
        prev = None
        history = []
        evals = 0
        for level in range(0, max_level + 1):
            scale = max(abs(prev) / abs(width), 1) if prev is not None else 1
            tol = mpmath.ldexp(scale, -target_bits - 12)
            part = 0
            for tail in _nodes(level, prec):
                quiet = 0
                for node in tail:
                    term = node[2] * f(_point(a, b, node))
                    evals += 1
                    part += term
                    quiet = quiet + 1 if abs(term) < tol else 0
                    if quiet >= 3:
                        break
            total = (total / 2 + part) if level > 0 else part
            est = total * width
            history.append(est)
            if prev is not None and level >= min_level:
                gap = abs(est - prev)
                scale = max(abs(est), 1)
                if gap <= mpmath.ldexp(scale, -target_bits):
                    return QuadratureResult(est, 10 * gap + mpmath.ldexp(scale, -prec + 4), level, evals, history)
            prev = est
        gap = abs(history[-1] - history[-2])
        raise QuadratureFailure(f"no convergence after level {max_level}: last gap {mpmath.nstr(gap, 5)}")


def tanh_sinh_integrate(f, region, target_digits=30, prec=None, max_level=10):
    """Integrate ``f(*coords)`` over an :class:`IntegrationRegion` (outer axis first).

    Inner integrals run at a precision raised by the bits lost to narrow inner
    intervals, and target slightly more bits than the outer one. If ``f`` has a
    ``partial`` attribute, ``f.partial(*outer)`` is used to specialize the integrand
    once per outer node.
    """
    if isinstance(region, (tuple, list)):
        region = IntegrationRegion(tuple(region))
    if region.dim == 0 or region.dim > 3:
        raise DomainError("regions of dimension 1 to 3 are supported")
    prec = prec or mpmath.mp.prec
    target_bits = int(target_digits * math.log2(10)) + 1
    if target_bits > prec - 8:
        raise DomainError("target accuracy exceeds working precision")
    counter = [0]
    errs = []

    def integrate_axis(axis, outer, g, bits, wprec):
        lo, hi = region.interval(axis, outer)
        logax = region.is_log(axis)
        with mpmath.workprec(wprec):
            if logax:
                if lo <= 0:
                    raise DomainError("logarithmic axis needs a positive lower bound")
                lo, hi = mpmath.log(lo), mpmath.log(hi)
            width = abs(mpmath.mpmathify(hi) - lo)
        if width == 0:
            return mpmath.mpf(0)
        extra = max(0, -int(mpmath.log(width, 2))) if width < 1 else 0
        wp = wprec + extra
        last = axis == region.dim - 1
        to_x = mpmath.exp if logax else (lambda y: y)
        if last:
            def inner(y):
                return g(to_x(y))
        else:
            def inner(y):
                x = to_x(y)
                h = g.partial(x) if hasattr(g, "partial") else (lambda *rest, _x=x: g(_x, *rest))
                return integrate_axis(axis + 1, outer + (x,), h, bits + 12, wp)
        res = integrate_1d(inner, lo, hi, bits, wp, max_level=max_level)
        counter[0] += res.evaluations
        if axis == 0:
            errs.append(res)
        return res.value

    with mpmath.workprec(prec):
        val = integrate_axis(0, (), f, target_bits, prec + 16)
        top = errs[-1]
        return QuadratureResult(+val, top.error, top.levels, counter[0], top.history)
