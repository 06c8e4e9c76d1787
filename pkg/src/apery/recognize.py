"""Integer relations by lattice reduction, and recognition of constants as rational
combinations of a fixed basis of periods.

Values may be given as numbers or as callables ``prec -> value``; callables let a
candidate relation be re-checked at a precision higher than the one it was found
at.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError
from .numerics.constants import named_constant

__all__ = [
    "lll_reduce",
    "integer_relation",
    "find_relations",
    "ConstantBasis",
    "Recognition",
    "recognize_constant",
    "default_basis",
    "BASIS_LABELS",
]


def lll_reduce(basis, delta=Fraction(3, 4)):
    """LLL-reduce integer row vectors, with exact rational Gram-Schmidt data."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar, mu, B = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bstar[j])) / B[j] if B[j] else Fraction(0)
                v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
            bstar.append(v)
            B.append(sum(x * x for x in v))
        return bstar, mu, B

    bstar, mu, B = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for l in range(j + 1):
                    mu[k][l] -= q * (mu[j][l] if l < j else 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu, B = gram_schmidt()
            k = max(k - 1, 1)
    return b


def _evaluate(x, prec):
    with mpmath.workprec(prec):
        if callable(x):
            return mpmath.mpmathify(x(prec))
        v = x.value if hasattr(x, "value") and hasattr(x, "prec") else x
        return +mpmath.mpmathify(v)


def _height(c):
    return max(abs(v) for v in c)


@dataclass
class _Plan:
    lattice_prec: int
    verify_prec: int


def _plan(x, max_height, prec):
    n = len(x)
    need = int(math.ceil(10 * math.log2(max(max_height, 2)) * n))
    if all(callable(v) for v in x):
        return _Plan(prec, max(2 * prec, need))
    # without recomputable values the given precision is split: half finds, all verifies
    if prec < need:
        raise DomainError(
            f"precision {prec} bits is too low for height {max_height} with {n} values (need {need})"
        )
    return _Plan(prec // 2, prec)


def _candidates(vals, max_height, lattice_prec):
    n = len(vals)
    scale_bits = lattice_prec - 8
    with mpmath.workprec(lattice_prec + 16):
        big = [int(mpmath.nint(mpmath.ldexp(v, scale_bits))) for v in vals]
    rows = [[1 if i == j else 0 for j in range(n)] + [big[i]] for i in range(n)]
    reduced = lll_reduce(rows)
    out = []
    for row in reduced:
        c = row[:n]
        if any(c) and _height(c) <= max_height:
            out.append(c)
    return out


def _residual_ok(c, vals, prec, slack_bits):
    with mpmath.workprec(prec + 16):
        r = abs(mpmath.fsum(ci * v for ci, v in zip(c, vals)))
        size = max(abs(v) for v in vals)
        return r <= mpmath.ldexp(max(size, 1), -(prec - slack_bits)), r


def _normalize_sign(c):
    for v in c:
        if v:
            return list(c) if v > 0 else [-x for x in c]
    return list(c)


def find_relations(x, max_height=10 ** 4, prec=None, safety_digits=10):
    """All verified short relations among ``x`` found in the reduced basis.

    Returns a list of integer vectors, shortest first. A relation is kept when its
    residual is below ``10^-(digits - safety_digits)`` at the search precision and
    it still holds at the verification precision.
    """
    if len(x) < 2:
        raise DomainError("need at least two values")
    prec = prec or mpmath.mp.prec
    plan = _plan(x, max_height, prec)
    slack = int(safety_digits * math.log2(10))
    vals = [_evaluate(v, prec) for v in x]
    if any(not mpmath.isfinite(v) for v in vals):
        raise DomainError("non-finite value")
    with mpmath.workprec(plan.lattice_prec):
        vals_l = [+v for v in vals]
    found = []
    for c in _candidates(vals_l, max_height, plan.lattice_prec):
        ok, _ = _residual_ok(c, vals_l, plan.lattice_prec, slack)
        if ok:
            found.append(_normalize_sign(c))
    if not found:
        return []
    hi = [_evaluate(v, plan.verify_prec) for v in x]
    verified = [c for c in found if _residual_ok(c, hi, plan.verify_prec, slack)[0]]
    verified.sort(key=lambda c: (_height(c), c))
    return verified


def integer_relation(x, max_height=10 ** 4, prec=None):
    """Shortest verified integer relation ``c`` with ``sum c_i x_i = 0``, or None."""
    rel = find_relations(x, max_height, prec)
    return rel[0] if rel else None


# ---------------------------------------------------------------------------

BASIS_LABELS = {
    "one": lambda prec: mpmath.mpf(1),
    "zeta2": lambda prec: named_constant("zeta2", prec).value,
    "zeta3": lambda prec: named_constant("zeta3", prec).value,
    "pi3_sqrt3": lambda prec: named_constant("pi3_sqrt3", prec).value,
    "log2": lambda prec: named_constant("log2", prec).value,
    "L_chi3_3": lambda prec: named_constant("L_chi3_3", prec).value,
    "pi": lambda prec: named_constant("pi", prec).value,
}


@dataclass
class ConstantBasis:
    """Ordered labelled basis; values are callables of the precision."""

    labels: tuple
    values: tuple

    @classmethod
    def from_labels(cls, labels, prescreen=True, prec=256):
        labels = tuple(labels)
        unknown = [l for l in labels if l not in BASIS_LABELS]
        if unknown:
            raise DomainError(f"unknown basis labels: {unknown}")
        basis = cls(labels, tuple(BASIS_LABELS[l] for l in labels))
        if prescreen:
            basis.prescreen(prec)
        return basis

    def prescreen(self, prec=256, max_height=10 ** 4):
        """Reject pairs of basis values that are rationally proportional."""
        for i in range(len(self.labels)):
            for j in range(i + 1, len(self.labels)):
                rel = find_relations([self.values[i], self.values[j]], max_height, prec)
                if rel:
                    raise DomainError(f"basis values {self.labels[i]} and {self.labels[j]} are proportional")

    def __len__(self):
        return len(self.labels)


def default_basis(prescreen=False):
    return ConstantBasis.from_labels(("one", "zeta2", "zeta3", "pi3_sqrt3", "log2"), prescreen=prescreen)


@dataclass
class Recognition:
    coefficients: dict
    relation: list
    alternatives: list = field(default_factory=list)

    @property
    def ambiguous(self):
        return bool(self.alternatives)

    @property
    def height(self):
        return _height(self.relation)

    def expression(self):
        parts = []
        for label, c in self.coefficients.items():
            if not c:
                continue
            coeff = str(c)
            parts.append(coeff if label == "one" else f"{coeff} * {label}")
        text = " + ".join(parts) if parts else "0"
        return text.replace("+ -", "- ")

    def __str__(self):
        return self.expression()


def _express(c, labels):
    c0 = c[0]
    return {label: Fraction(-ci, c0) for label, ci in zip(labels, c[1:]) if ci}


def recognize_constant(x, basis: ConstantBasis | None = None, max_height=10 ** 4, prec=None):
    """Write ``x`` as a rational combination of the basis, or return None.

    When more than one independent relation involving ``x`` survives, the result
    lists them all under ``alternatives`` and makes no selection.
    """
    basis = basis or default_basis()
    rels = find_relations([x] + list(basis.values), max_height, prec)
    rels = [c for c in rels if c[0]]
    if not rels:
        return None
    first = rels[0]
    others = [c for c in rels[1:] if _independent(first, c)]
    if others:
        return Recognition({}, first, [first] + others)
    return Recognition(_express(first, basis.labels), first)


def _independent(u, v):
    # rank of the 2 x n matrix [u; v]
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if u[i] * v[j] - u[j] * v[i]:
                return True
    return False
