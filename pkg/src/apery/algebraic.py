"""Elements ``a + b*sqrt(D)`` of a quadratic field, with a fixed complex embedding."""
from __future__ import annotations

from fractions import Fraction

from .errors import DomainError

__all__ = ["AlgebraicNumber", "squarefree_part"]


def squarefree_part(n):
    """Return ``(s, f)`` with ``n = s * f**2`` and ``s`` square-free (sign kept in ``s``)."""
    n = int(n)
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, f, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            f *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1
    return sign * s * n, f


class AlgebraicNumber:
    """``a + b*sqrt(D)`` with rational ``a, b`` and square-free ``D``.

    The embedding sends ``sqrt(D)`` to the positive real root for ``D > 0``
    and to ``i*sqrt(-D)`` for ``D < 0``.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=1):
        a, b, D = Fraction(a), Fraction(b), int(D)
        if D == 0:
            b = Fraction(0)
        elif b:
            s, f = squarefree_part(D)
            D, b = s, b * f
            if D == 1:
                a, b = a + b, Fraction(0)
        if b == 0:
            D = 1
        self.a, self.b, self.D = a, b, D

    @classmethod
    def sqrt(cls, n):
        n = Fraction(n)
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, Fraction(1, n.denominator), n.numerator * n.denominator)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, AlgebraicNumber):
            return x
        return cls(x)

    @classmethod
    def parse(cls, text):
        """Parse expressions such as ``17-12*sqrt(2)``, ``9*sqrt(-3)`` or ``1/sqrt(-3)``."""
        import sympy

        text = text.strip()
        # sympy would turn sqrt(-3) into sqrt(3)*I; mark negative radicands explicitly
        try:
            expr = sympy.sympify(text.replace("sqrt(-", "_nsqrt("), locals={"_nsqrt": lambda n: sympy.I * sympy.sqrt(n)})
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise DomainError(f"cannot parse algebraic number {text!r}") from exc
        return cls.from_sympy(expr)

    @classmethod
    def from_sympy(cls, expr):
        import sympy

        expr = sympy.expand(sympy.radsimp(sympy.nsimplify(expr)))
        a, b, D = Fraction(0), Fraction(0), 1
        for term in sympy.Add.make_args(expr):
            coeff, rest = term.as_coeff_Mul()
            if not coeff.is_Rational:
                raise DomainError(f"not a quadratic irrationality: {expr}")
            c = Fraction(int(coeff.p), int(coeff.q))
            if rest == 1:
                a += c
                continue
            radicand = None
            if rest == sympy.I:
                radicand = -1
            elif rest.is_Pow and rest.exp == sympy.Rational(1, 2) and rest.base.is_Integer:
                radicand = int(rest.base)
            elif rest.is_Mul and sympy.I in rest.args:
                other = rest / sympy.I
                if other.is_Pow and other.exp == sympy.Rational(1, 2) and other.base.is_Integer:
                    radicand = -int(other.base)
            if radicand is None:
                raise DomainError(f"not a quadratic irrationality: {expr}")
            s, f = squarefree_part(radicand)
            if b and s != D:
                raise DomainError(f"mixes two quadratic fields: {expr}")
            D, b = s, b + c * f
        return cls(a, b, D)

    def to_sympy(self):
        import sympy

        a = sympy.Rational(self.a.numerator, self.a.denominator)
        b = sympy.Rational(self.b.numerator, self.b.denominator)
        return a + b * sympy.sqrt(self.D)

    # arithmetic
    def _other(self, other):
        other = AlgebraicNumber.coerce(other)
        if self.b and other.b and self.D != other.D:
            raise DomainError("arithmetic across different quadratic fields")
        D = self.D if self.b else other.D
        return other, D

    def __add__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        other, D = self._other(other)
        return AlgebraicNumber(self.a + other.a, self.b + other.b, D)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self + (-AlgebraicNumber.coerce(other))

    def __rsub__(self, other):
        return AlgebraicNumber.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        other, D = self._other(other)
        return AlgebraicNumber(self.a * other.a + self.b * other.b * D, self.a * other.b + self.b * other.a, D)

    __rmul__ = __mul__

    def conjugate(self):
        return AlgebraicNumber(self.a, -self.b, self.D)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return AlgebraicNumber(c.a / n, c.b / n, c.D)

    def __truediv__(self, other):
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self * AlgebraicNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return AlgebraicNumber.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = AlgebraicNumber(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicNumber(other)
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        return (self.a, self.b, self.D) == (other.a, other.b, other.D)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    @property
    def is_rational(self):
        return self.b == 0

    @property
    def is_real(self):
        return self.b == 0 or self.D > 0

    def to_complex(self, prec=None):
        import mpmath

        ctx = mpmath.mp
        if prec is not None:
            with mpmath.workprec(prec):
                return +self._embed(ctx)
        return self._embed(ctx)

    def _embed(self, ctx):
        a = ctx.mpf(self.a.numerator) / self.a.denominator
        if not self.b:
            return a
        b = ctx.mpf(self.b.numerator) / self.b.denominator
        if self.D > 0:
            return a + b * ctx.sqrt(self.D)
        return ctx.mpc(a, b * ctx.sqrt(-self.D))

    def abs(self, prec=None):
        import mpmath

        return mpmath.fabs(self.to_complex(prec))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        b = self.b
        rad = f"sqrt({self.D})"
        bpart = rad if b == 1 else f"-{rad}" if b == -1 else f"{b}*{rad}"
        if self.a == 0:
            return bpart
        if bpart.startswith("-"):
            return f"{self.a}{bpart}"
        return f"{self.a}+{bpart}"

    def __repr__(self):
        return f"AlgebraicNumber({self})"
