"""Sparse Laurent polynomials with exact rational coefficients, and constant-term
period sequences ``a_k = [phi^k]_0``."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from .errors import DomainError

__all__ = [
    "LaurentPolynomial",
    "RationalSequence",
    "multiply",
    "constant_term_sequence",
    "partial_constant_term",
]


class RationalSequence(tuple):
    """Finite prefix ``(u_0, ..., u_{n-1})`` of an exact rational sequence."""

    def __new__(cls, terms=()):
        return super().__new__(cls, (Fraction(x) for x in terms))

    @property
    def length(self):
        return len(self)

    def scaled(self, c):
        c = Fraction(c)
        return RationalSequence(c * x for x in self)

    def __repr__(self):
        return f"RationalSequence({[str(x) for x in self]})"


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not exact")
    return Fraction(c)


class LaurentPolynomial:
    """Finite sum ``sum_m c_m x^m`` over exponent vectors ``m`` in Z^n."""

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars, terms=None):
        self.num_vars = int(num_vars)
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != self.num_vars:
                raise DomainError(f"exponent {m} does not have length {self.num_vars}")
            c = _frac(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, num_vars, c=1):
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars, i, power=1):
        m = [0] * num_vars
        m[i] = power
        return cls(num_vars, {tuple(m): 1})

    @classmethod
    def from_terms(cls, rows, num_vars=None):
        """Build from ``(coeff, exponents)`` pairs."""
        rows = list(rows)
        if num_vars is None:
            num_vars = len(rows[0][1])
        out = {}
        for c, m in rows:
            m = tuple(m)
            out[m] = out.get(m, 0) + _frac(c)
        return cls(num_vars, out)

    @classmethod
    def from_sympy(cls, expr, gens):
        """Expand a sympy rational expression whose denominator is a monomial."""
        import sympy

        expr = sympy.together(sympy.sympify(expr))
        num, den = sympy.fraction(expr)
        dpoly = sympy.Poly(den, *gens)
        if len(dpoly.terms()) != 1:
            raise DomainError("denominator is not a monomial")
        (dexp, dcoef), = dpoly.terms()
        out = {}
        for exp, c in sympy.Poly(sympy.expand(num), *gens).terms():
            q = sympy.Rational(c) / sympy.Rational(dcoef)
            out[tuple(e - d for e, d in zip(exp, dexp))] = Fraction(int(q.p), int(q.q))
        return cls(len(gens), out)

    def to_sympy(self, gens):
        import sympy

        total = sympy.Integer(0)
        for m, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for g, e in zip(gens, m):
                term *= g ** e
            total += term
        return total

    # arithmetic
    def _check(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(self.num_vars, other)
        if other.num_vars != self.num_vars:
            raise DomainError("mismatched number of variables")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPolynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.num_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        return multiply(self, self._check(other))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise DomainError("negative powers are not Laurent polynomials in general")
        result = LaurentPolynomial.constant(self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.num_vars == other.num_vars and self.terms == other.terms
        return self == self._check(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            mono = "*".join(f"x{i + 1}^{e}" if e != 1 else f"x{i + 1}" for i, e in enumerate(m) if e)
            parts.append(f"({self.terms[m]})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # queries
    def constant_term(self):
        return self.terms.get((0,) * self.num_vars, Fraction(0))

    def is_zero(self):
        return not self.terms

    def shift(self, c):
        """``phi + c`` for a rational constant ``c``."""
        return self + LaurentPolynomial.constant(self.num_vars, c)

    def denominator(self):
        return reduce(math.lcm, (c.denominator for c in self.terms.values()), 1)

    def evaluate(self, point):
        """Evaluate at a point; coordinates may be Fractions or mpmath numbers."""
        exact = not _is_mp(point)
        if exact:
            # int ** negative int would fall back to floats
            point = [Fraction(x) if isinstance(x, int) else x for x in point]
        total = 0
        for m, c in self.terms.items():
            term = c if exact else _mp_frac(c)
            for x, e in zip(point, m):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def evaluator(self):
        """A fast mpmath evaluator ``f(*coords)``; exact coefficients are converted per call
        at the ambient working precision."""
        import mpmath

        items = sorted(self.terms.items())
        nums = [(c.numerator, c.denominator, m) for m, c in items]

        def f(*xs):
            total = mpmath.mpf(0)
            for p, q, m in nums:
                term = mpmath.mpf(p) / q
                for x, e in zip(xs, m):
                    if e:
                        term *= x ** e
                total += term
            return total

        return f


def _is_mp(point):
    return any(type(x).__module__.startswith("mpmath") for x in point)


def _mp_frac(c):
    import mpmath

    return mpmath.mpf(c.numerator) / c.denominator


def multiply(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    if f.num_vars != g.num_vars:
        raise DomainError("mismatched number of variables")
    out = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return LaurentPolynomial(f.num_vars, out)


# ---------------------------------------------------------------------------
# constant-term sequences on packed integer keys


class _Packer:
    """Signed base-B packing of bounded exponent vectors into Python ints.

    Packing is additive, so multiplying monomials is integer addition of keys,
    and the zero exponent packs to 0.
    """

    def __init__(self, n, bound):
        self.n = n
        self.base = 2 * bound + 1
        self.half = bound

    def pack(self, m):
        key = 0
        for e in reversed(m):
            key = key * self.base + e
        return key

    def unpack(self, key):
        out = []
        for _ in range(self.n):
            r = key % self.base
            if r > self.half:
                r -= self.base
            out.append(r)
            key = (key - r) // self.base
        return tuple(out)


def constant_term_sequence(phi: LaurentPolynomial, K: int, prune=None) -> RationalSequence:
    """``(a_0, ..., a_K)`` with ``a_k`` the constant term of ``phi**k``.

    ``prune`` (the Newton polytope of ``phi``) enables discarding monomials that
    can no longer reach the origin within the remaining ``K - j`` factors.
    """
    if K < 0:
        raise DomainError("number of terms must be non-negative")
    if phi.is_zero():
        return RationalSequence([1] + [0] * K)
    if prune is not None:
        from .lattice import newton_polytope

        if prune != newton_polytope(phi):
            raise DomainError("pruning polytope is not the Newton polytope of phi")
    n = phi.num_vars
    D = phi.denominator()
    # integer-scaled copy: a_k = A_k / D^k
    scaled = [(m, int(c * D)) for m, c in phi.terms.items()]
    bound = max(1, max(abs(e) for m, _ in scaled for e in m)) * max(K, 1)
    packer = _Packer(n, bound)
    step = [(packer.pack(m), c) for m, c in scaled]
    facets = list(prune.facets) if prune is not None else None

    current = {0: 1}
    out = [Fraction(1)]
    for j in range(1, K + 1):
        nxt = {}
        get = nxt.get
        for key, c in current.items():
            for dk, dc in step:
                k2 = key + dk
                nxt[k2] = get(k2, 0) + c * dc
        if facets is not None and j < K:
            remaining = K - j
            kept = {}
            for key, c in nxt.items():
                if not c:
                    continue
                m = packer.unpack(key)
                if all(-sum(a * b for a, b in zip(f.normal, m)) + remaining * f.offset >= 0 for f in facets):
                    kept[key] = c
            nxt = kept
        current = nxt
        out.append(Fraction(current.get(0, 0), D ** j))
    return RationalSequence(out)


def partial_constant_term(phi: LaurentPolynomial, k: int, var_index: int) -> LaurentPolynomial:
    """Terms of ``phi**k`` free of the chosen variable, as a polynomial in the others."""
    if not 0 <= var_index < phi.num_vars:
        raise DomainError(f"variable index {var_index} out of range")
    if k < 0:
        raise DomainError("power must be non-negative")
    power = phi ** k
    out = {}
    for m, c in power.terms.items():
        if m[var_index] == 0:
            out[m[:var_index] + m[var_index + 1:]] = c
    return LaurentPolynomial(phi.num_vars - 1, out)
