"""Differential operators in ``t`` and the Euler operator ``D = t d/dt``.

An operator ``L = sum_i t^i P_i(D)`` is stored as its coefficient matrix
``beta[i][j]`` (coefficient of ``t^i D^j``).  Applying ``L`` to a power series
``sum u_k t^k`` gives the recurrence ``g_m = sum_i P_i(m - i) u_{m-i}``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebraic import AlgebraicNumber
from .errors import DomainError
from .laurent import RationalSequence

__all__ = [
    "DiffOperator",
    "WeylOperator",
    "RecurrenceScheme",
    "SingularPoint",
    "LocalExponents",
    "stirling2",
    "apply_to_series",
    "to_recurrence",
    "local_exponents",
    "singular_locus",
    "regularize_sequence",
    "fl_transform_operator",
]


# --- dense univariate polynomials, coefficient lists low degree first -------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _pmul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pshift(p, c):
    """Coefficients of ``p(T + c)``."""
    out = []
    for a in reversed(p):
        # Horner: out = out*(T+c) + a
        nxt = [0] * (len(out) + 1)
        for i, b in enumerate(out):
            nxt[i + 1] += b
            nxt[i] += b * c
        nxt[0] += a
        out = nxt
    return _trim(out)


def _peval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


@lru_cache(maxsize=None)
def stirling2(n, k):
    """Stirling numbers of the second kind."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def _falling(x, n):
    out = 1
    for i in range(n):
        out *= x - i
    return out


# --- operators in t, D ------------------------------------------------------

class DiffOperator:
    """``sum_{i,j} beta[i][j] t^i D^j`` with exact rational coefficients."""

    __slots__ = ("beta",)

    def __init__(self, beta):
        rows = [[Fraction(c) for c in row] for row in beta]
        width = max((len(r) for r in rows), default=0)
        rows = [r + [Fraction(0)] * (width - len(r)) for r in rows]
        while rows and not any(rows[-1]):
            rows.pop()
        while rows and rows[0] and not any(r[-1] for r in rows):
            rows = [r[:-1] for r in rows]
        self.beta = tuple(tuple(r) for r in rows)

    # construction
    @classmethod
    def from_polys(cls, polys):
        """From the list ``[P_0, P_1, ...]`` of coefficient lists in ``D``."""
        return cls([list(p) for p in polys])

    @classmethod
    def from_dict(cls, terms):
        """From ``{(i, j): c}`` meaning ``c t^i D^j``."""
        if not terms:
            return cls([])
        d = max(i for i, _ in terms)
        r = max(j for _, j in terms)
        beta = [[0] * (r + 1) for _ in range(d + 1)]
        for (i, j), c in terms.items():
            beta[i][j] += Fraction(c)
        return cls(beta)

    @classmethod
    def from_sympy(cls, expr, t, D):
        """From a sympy polynomial in commuting symbols, read as ``t^i`` to the left of ``D^j``."""
        import sympy

        poly = sympy.Poly(sympy.expand(expr), t, D)
        return cls.from_dict({(i, j): Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
                              for (i, j), c in poly.terms()})

    @classmethod
    def parse(cls, text):
        """Parse a sum of terms ``c * t^i * D^j``; factors may be omitted or reordered."""
        src = text.replace(" ", "").replace("\n", "").replace("−", "-")
        if not src:
            raise DomainError("empty operator text")
        if src[0] not in "+-":
            src = "+" + src
        terms = {}
        pieces = re.findall(r"[+-][^+-]+", src)
        if "".join(pieces) != src:
            raise DomainError(f"cannot parse operator {text!r}")
        for piece in pieces:
            sign = -1 if piece[0] == "-" else 1
            coeff, i, j = Fraction(sign), 0, 0
            for factor in piece[1:].split("*"):
                if not factor:
                    raise DomainError(f"empty factor in {piece!r}")
                m = re.fullmatch(r"([tD])(?:\^(\d+))?", factor)
                if m:
                    e = int(m.group(2) or 1)
                    if m.group(1) == "t":
                        i += e
                    else:
                        j += e
                    continue
                try:
                    coeff *= Fraction(factor)
                except (ValueError, ZeroDivisionError) as exc:
                    raise DomainError(f"bad factor {factor!r} in operator text") from exc
            terms[(i, j)] = terms.get((i, j), 0) + coeff
        return cls.from_dict(terms)

    def to_text(self):
        parts = []
        for i, row in enumerate(self.beta):
            for j, c in enumerate(row):
                if not c:
                    continue
                fac = [str(abs(c))] if abs(c) != 1 or not (i or j) else []
                if i:
                    fac.append("t" if i == 1 else f"t^{i}")
                if j:
                    fac.append("D" if j == 1 else f"D^{j}")
                parts.append(("-" if c < 0 else "+") + " " + " * ".join(fac))
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+") else "-" + text[2:]

    __str__ = to_text

    def __repr__(self):
        return f"DiffOperator({self.to_text()!r})"

    # shape
    @property
    def degree(self):
        return len(self.beta) - 1

    @property
    def order(self):
        return len(self.beta[0]) - 1 if self.beta else -1

    def P(self, i):
        """Coefficient list of ``P_i`` (zero beyond the degree)."""
        if 0 <= i < len(self.beta):
            return _trim(self.beta[i])
        return []

    def P_eval(self, i, T):
        return _peval(self.P(i), T)

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.beta == other.beta

    def __hash__(self):
        return hash(self.beta)

    def is_zero(self):
        return not self.beta

    # arithmetic
    def _terms(self):
        return {(i, j): c for i, row in enumerate(self.beta) for j, c in enumerate(row) if c}

    def __add__(self, other):
        a = self._terms()
        for k, c in other._terms().items():
            a[k] = a.get(k, 0) + c
        return DiffOperator.from_dict(a)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return DiffOperator([[c * x for x in row] for row in self.beta])

    def __mul__(self, other):
        """Composition, normal-ordered with ``D t^b = t^b (D + b)``."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = []
        for a in range(len(self.beta)):
            Pa = self.P(a)
            if not Pa:
                continue
            for b in range(len(other.beta)):
                Qb = other.P(b)
                if not Qb:
                    continue
                prod = _pmul(_pshift(Pa, b), Qb)
                while len(out) <= a + b:
                    out.append([])
                out[a + b] = _padd(out[a + b], prod)
        return DiffOperator(out)

    def __rmul__(self, c):
        return self.scale(c)

    def normalized(self):
        """Scale so that ``beta[0][r] = 1`` when possible, else to primitive integers."""
        if self.is_zero():
            return self
        lead = self.beta[0][self.order]
        if lead:
            return self.scale(1 / lead)
        return self.primitive()

    def primitive(self):
        nz = [c for row in self.beta for c in row if c]
        if not nz:
            return self
        den = math.lcm(*(c.denominator for c in nz))
        num = math.gcd(*(int(c * den) for c in nz))
        first = next(c for row in self.beta for c in reversed(row) if c)
        sign = -1 if first < 0 else 1
        return self.scale(Fraction(sign * den, num))

    def involution(self):
        """``sum_i t^i P_{d-i}(-D-1)``; exchanges the roles of ``t = 0`` and ``t = oo``."""
        d = self.degree
        return DiffOperator([_pscale_arg(self.P(d - i), -1, -1) for i in range(d + 1)])

    # series action
    def apply_to_series(self, u):
        return apply_to_series(self, u)

    def to_recurrence(self):
        return to_recurrence(self)

    def dt_form(self):
        """Coefficient polynomials ``c_k(t)`` with ``L = sum_k c_k(t) (d/dt)^k``."""
        r = self.order
        cs = [[] for _ in range(r + 1)]
        for i, row in enumerate(self.beta):
            for j, b in enumerate(row):
                if not b:
                    continue
                for l in range(j + 1):
                    s = stirling2(j, l)
                    if s:
                        poly = [0] * (i + l) + [b * s]
                        cs[l] = _padd(cs[l], poly)
        return cs

    def to_weyl(self):
        """Same operator as a :class:`WeylOperator` in ``t`` and ``d/dt``."""
        terms = {}
        for k, c in enumerate(self.dt_form()):
            for a, x in enumerate(c):
                if x:
                    terms[(a, k)] = terms.get((a, k), 0) + x
        return WeylOperator(terms)

    def leading_polynomial(self):
        """``sum_i beta[i][r] t^i``: the leading ``d/dt`` coefficient divided by ``t^r``."""
        r = self.order
        return _trim([row[r] for row in self.beta])


def _pscale_arg(p, a, b):
    """Coefficients of ``p(a*T + b)``."""
    out = []
    for c in reversed(p):
        nxt = [0] * (len(out) + 1)
        for i, x in enumerate(out):
            nxt[i + 1] += a * x
            nxt[i] += b * x
        nxt[0] += c
        out = nxt
    return _trim(out)


@dataclass(frozen=True)
class RecurrenceScheme:
    """Offsets ``i = 0..span`` with polynomials ``Q_i(m) = P_i(m - i)``.

    ``g_m = sum_i Q_i(m) u_{m-i}``.
    """

    span: int
    polys: tuple

    def coefficient(self, i, m):
        return _peval(self.polys[i], m)

    def apply(self, u):
        u = RationalSequence(u)
        out = []
        for m in range(len(u)):
            out.append(sum((self.coefficient(i, m) * u[m - i] for i in range(min(m, self.span) + 1)), Fraction(0)))
        return RationalSequence(out)

    def __str__(self):
        def show(p):
            return " + ".join(f"({c})*m^{k}" for k, c in enumerate(p) if c) or "0"
        return "; ".join(f"u[m-{i}]: {show(p)}" for i, p in enumerate(self.polys))


def apply_to_series(L: DiffOperator, u) -> RationalSequence:
    """Coefficients of ``L`` applied to ``sum u_k t^k``, indices ``0..len(u)-1``."""
    u = RationalSequence(u)
    if not len(u):
        raise DomainError("empty sequence")
    polys = [L.P(i) for i in range(L.degree + 1)]
    out = []
    for m in range(len(u)):
        acc = Fraction(0)
        for i in range(min(m, L.degree) + 1):
            if u[m - i]:
                acc += _peval(polys[i], m - i) * u[m - i]
        out.append(acc)
    return RationalSequence(out)


def to_recurrence(L: DiffOperator) -> RecurrenceScheme:
    return RecurrenceScheme(L.degree, tuple(tuple(_pshift(L.P(i), -i)) for i in range(L.degree + 1)))


def regularize_sequence(u, direction="forward") -> RationalSequence:
    """``forward``: ``u_k / k!``; ``inverse``: ``k! u_k``."""
    u = RationalSequence(u)
    if direction == "forward":
        return RationalSequence(x / math.factorial(k) for k, x in enumerate(u))
    if direction == "inverse":
        return RationalSequence(x * math.factorial(k) for k, x in enumerate(u))
    raise DomainError(f"unknown direction {direction!r}")


# --- operators in s and d/ds -------------------------------------------------

class WeylOperator:
    """``sum c_{ab} x^a (d/dx)^b`` in normal order (multiplications to the left)."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {(int(a), int(b)): Fraction(c) for (a, b), c in terms.items() if c}

    def __eq__(self, other):
        return isinstance(other, WeylOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        parts = [f"({c})*s^{a}*d^{b}" for (a, b), c in sorted(self.terms.items())]
        return "WeylOperator(" + (" + ".join(parts) or "0") + ")"

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return WeylOperator(out)

    def __neg__(self):
        return WeylOperator({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Composition, using ``d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k)``."""
        if isinstance(other, (int, Fraction)):
            return WeylOperator({k: c * other for k, c in self.terms.items()})
        out = {}
        for (a, b), c1 in self.terms.items():
            for (cc, e), c2 in other.terms.items():
                for k in range(min(b, cc) + 1):
                    coeff = c1 * c2 * math.comb(b, k) * _falling(cc, k)
                    key = (a + cc - k, b - k + e)
                    out[key] = out.get(key, 0) + coeff
        return WeylOperator(out)

    def to_diffop(self):
        """Rewrite in ``x`` and ``D = x d/dx`` when every term has ``a >= b``."""
        out = {}
        for (a, b), c in self.terms.items():
            if a < b:
                raise DomainError("operator has negative powers in Euler form")
            # x^b d^b = D(D-1)...(D-b+1)
            for j, s in enumerate(_falling_coeffs(b)):
                if s:
                    out[(a - b, j)] = out.get((a - b, j), 0) + c * s
        return DiffOperator.from_dict(out)

    def apply_to_series(self, u):
        """Coefficients ``0..N`` of the operator applied to ``sum u_k x^k``, where ``N`` is
        the largest index determined by the given prefix."""
        u = RationalSequence(u)
        shift = max((b - a for a, b in self.terms), default=0)
        n_out = len(u) - max(shift, 0)
        out = []
        for n in range(n_out):
            acc = Fraction(0)
            for (a, b), c in self.terms.items():
                k = n - a + b
                if 0 <= k < len(u):
                    acc += c * _falling(k, b) * u[k]
            out.append(acc)
        return RationalSequence(out)


def _falling_coeffs(b):
    """Coefficients of ``T(T-1)...(T-b+1)``."""
    p = [1]
    for i in range(b):
        p = _pmul(p, [-i, 1])
    return p


def fl_transform_operator(L) -> WeylOperator:
    """Substitute ``d/dt -> -s`` and ``t -> d/ds`` and normal-order in ``s, d/ds``."""
    W = L.to_weyl() if isinstance(L, DiffOperator) else L
    out = WeylOperator({})
    for (i, j), c in W.terms.items():
        # t^i d^j  ->  d_s^i (-s)^j
        out = out + WeylOperator({(0, i): c * (-1) ** j}) * WeylOperator({(j, 0): 1})
    return out


# --- singular points and local exponents -----------------------------------

@dataclass(frozen=True)
class SingularPoint:
    value: object  # AlgebraicNumber, or an mpmath complex when not quadratic
    modulus: object
    exact: bool


@dataclass(frozen=True)
class LocalExponents:
    point: object
    exponents: tuple
    regular: bool
    indicial: object = None


def _sympy_roots(poly_coeffs):
    """Roots of an exact polynomial, as AlgebraicNumbers where quadratic, else numeric."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum((_to_sym(c) * x ** k for k, c in enumerate(poly_coeffs)), sympy.Integer(0))
    expr = sympy.expand(expr)
    if expr == 0:
        raise DomainError("zero polynomial has no root set")
    poly = sympy.Poly(expr, x)
    roots = []
    found = sympy.roots(poly, multiple=True)
    if len(found) == poly.degree():
        for rt in found:
            try:
                roots.append(AlgebraicNumber.from_sympy(rt))
            except Exception:
                roots.append(sympy.N(rt, 50))
        return roots, True
    import mpmath

    numeric = mpmath.polyroots([complex(sympy.N(c, 60)) for c in reversed(poly.all_coeffs())], maxsteps=200, extraprec=200)
    return list(numeric), False


def _to_sym(c):
    import sympy

    if isinstance(c, AlgebraicNumber):
        return c.to_sympy()
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def singular_locus(L: DiffOperator, prec=None):
    """Finite nonzero singular points: roots of ``sum_i beta[i][r] t^i``.

    The points 0 and infinity are always singular for these operators and are
    not listed. Points are sorted by modulus.
    """
    lead = L.leading_polynomial()
    # strip powers of t: those only affect the point 0
    while lead and lead[0] == 0:
        lead = lead[1:]
    if len(lead) <= 1:
        return []
    roots, exact = _sympy_roots(lead)
    out = []
    for rt in roots:
        if isinstance(rt, AlgebraicNumber):
            out.append(SingularPoint(rt, rt.abs(prec), True))
        else:
            import mpmath

            out.append(SingularPoint(rt, abs(mpmath.mpmathify(rt)), False))
    out.sort(key=lambda p: p.modulus)
    return out


def _poly_over(coeffs):
    return [AlgebraicNumber.coerce(c) for c in coeffs]


def _recenter(p, sigma):
    """Coefficients of ``p(sigma + u)`` in ``u``, over the field of ``sigma``."""
    out = []
    for a in reversed(p):
        nxt = [AlgebraicNumber(0)] * (len(out) + 1)
        for i, b in enumerate(out):
            nxt[i + 1] = nxt[i + 1] + b
            nxt[i] = nxt[i] + b * sigma
        nxt[0] = nxt[0] + a
        out = nxt
    return out


def _order(p):
    for k, c in enumerate(p):
        if c:
            return k
    return math.inf


def local_exponents(L: DiffOperator, point) -> LocalExponents:
    """Local exponents at ``0``, ``"infinity"`` or a finite point given as an AlgebraicNumber."""
    r = L.order
    if isinstance(point, str) and point in ("infinity", "oo", "inf"):
        Pd = L.P(L.degree)
        regular = len(Pd) - 1 == r
        if not regular:
            return LocalExponents("infinity", (), False, None)
        indicial = _pscale_arg(Pd, -1, 0)
        roots, _ = _sympy_roots(indicial)
        return LocalExponents("infinity", tuple(roots), True, tuple(indicial))
    point = AlgebraicNumber.coerce(point)
    if point == 0:
        P0 = L.P(0)
        regular = len(P0) - 1 == r
        if not regular:
            return LocalExponents(point, (), False, None)
        roots, _ = _sympy_roots(P0)
        return LocalExponents(point, tuple(roots), True, tuple(P0))
    cs = [_recenter(_poly_over(c), point) for c in L.dt_form()]
    orders = [_order(c) - i for i, c in enumerate(cs)]
    nu = min(orders)
    # Fuchs criterion: the minimum must be attained by the leading coefficient
    if orders[r] != nu:
        return LocalExponents(point, (), False, None)
    indicial = [AlgebraicNumber(0)] * (r + 1)
    for i, c in enumerate(cs):
        if orders[i] == nu:
            lead = c[i + nu]
            for k, f in enumerate(_falling_coeffs(i)):
                indicial[k] = indicial[k] + lead * f
    roots, _ = _sympy_roots(indicial)
    return LocalExponents(point, tuple(roots), True, tuple(indicial))
