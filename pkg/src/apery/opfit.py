"""Recover an operator ``L`` of order ``r`` and degree ``d`` with ``L u = 0`` from a
prefix of the power series ``u``, by an exact nullspace computation."""
from __future__ import annotations

import math
from fractions import Fraction

from .diffop import DiffOperator, apply_to_series
from .errors import AmbiguousFit, DomainError
from .laurent import RationalSequence

__all__ = ["fit_operator", "nullspace", "equation_rows"]

# word-size primes for the rank pre-screen
_PRIMES = (2147483629, 2147483587, 2147483579)


def equation_rows(u, r, d, count):
    """Integer rows ``m = 0..count-1`` of the linear system in the unknowns ``beta_ij``.

    Unknown ``(i, j)`` sits in column ``i*(r+1) + j``; row ``m`` reads
    ``sum_{i,j} beta_ij (m-i)^j u_{m-i} = 0``.
    """
    den = math.lcm(*(Fraction(x).denominator for x in u[:count])) if count else 1
    w = [int(Fraction(x) * den) for x in u[:count]]
    rows = []
    for m in range(count):
        row = []
        for i in range(d + 1):
            k = m - i
            for j in range(r + 1):
                row.append(k ** j * w[k] if k >= 0 else 0)
        g = math.gcd(*row) if any(row) else 1
        rows.append([x // g for x in row])
    return rows


def _rank_mod_p(rows, p):
    rows = [[x % p for x in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = [x * inv % p for x in rows[rank]]
        rows[rank] = prow
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        rank += 1
    return rank


def nullspace(rows, ncols):
    """Basis of the rational nullspace of an integer matrix (fraction-free elimination)."""
    A = [list(r) for r in rows]
    pivots = []
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for i in range(len(A)):
            if i == rank:
                continue
            f = A[i][col]
            if i > rank:
                # Bareiss step keeps entries integral and bounded
                A[i] = [(p * a - f * b) // prev for a, b in zip(A[i], A[rank])]
            elif f:
                A[i] = [p * a - f * b for a, b in zip(A[i], A[rank])]
        prev = p
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = Fraction(-A[row_idx][fc], A[row_idx][pc])
        basis.append(vec)
    return basis


def fit_operator(u, r: int, d: int, guard: int = 10):
    """Operator of order ``r`` and degree ``d`` annihilating ``u``, or ``None`` if none exists.

    The system is solved on the first ``(d+1)(r+1) + guard`` coefficients and the
    result is verified against the whole prefix.
    """
    u = RationalSequence(u)
    if r < 0 or d < 0:
        raise DomainError("order and degree must be non-negative")
    ncols = (d + 1) * (r + 1)
    need = ncols + guard
    if len(u) < need:
        raise DomainError(f"need at least {need} terms, got {len(u)}")
    if u[0] == 0:
        raise DomainError("u_0 must be nonzero")
    rows = equation_rows(u, r, d, need)
    # a full-rank reduction modulo any prime proves the nullspace is trivial
    if any(_rank_mod_p(rows, p) == ncols for p in _PRIMES):
        return None
    basis = nullspace(rows, ncols)
    if not basis:
        return None
    if len(basis) > 1:
        raise AmbiguousFit([_to_operator(v, r, d) for v in basis])
    L = _to_operator(basis[0], r, d)
    if any(apply_to_series(L, u)):
        return None
    return L.normalized()


def _to_operator(vec, r, d):
    beta = [[vec[i * (r + 1) + j] for j in range(r + 1)] for i in range(d + 1)]
    return DiffOperator(beta).primitive()
