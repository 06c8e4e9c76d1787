"""Lattice polytopes in dimension <= 3: hulls, polar duals, reflexivity, volume,
and the edge-polynomial temperedness test for two-variable Laurent polynomials.

All geometry is exact. Points may carry integer or :class:`~fractions.Fraction`
coordinates; rational polytopes appear as polar duals of non-reflexive
polytopes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import DomainError

__all__ = [
    "Facet",
    "LatticePolytope",
    "convex_hull",
    "newton_polytope",
    "polar_dual",
    "is_reflexive",
    "normalized_volume",
    "lattice_points",
    "interior_lattice_points",
    "minkowski_sum",
    "EdgeReport",
    "TemperednessReport",
    "is_tempered_2d",
    "cyclotomic_polynomial",
    "is_cyclotomic_product",
]


def _norm_point(p):
    out = []
    for c in p:
        c = Fraction(c)
        out.append(c.numerator if c.denominator == 1 else c)
    return tuple(out)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _primitive(v):
    g = reduce(math.gcd, (abs(int(x)) for x in v), 0)
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _rank(vectors):
    """Rank of a list of rational vectors (fraction-based elimination)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Facet:
    """Half-space ``<normal, x> >= -offset`` with a primitive integer normal."""

    normal: tuple
    offset: object

    def value(self, x):
        return _dot(self.normal, x) + self.offset

    def contains(self, x):
        return self.value(x) >= 0


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many rational points, with both representations.

    ``facets`` is populated only for full-dimensional polytopes.
    ``is_lattice`` records whether every vertex is integral.
    """

    ambient_dim: int
    vertices: tuple
    facets: tuple = field(default=())
    dim: int = 0

    @property
    def is_full_dimensional(self):
        return self.dim == self.ambient_dim

    @property
    def is_lattice(self):
        return all(isinstance(c, int) for v in self.vertices for c in v)

    def contains(self, x):
        if not self.is_full_dimensional:
            raise DomainError("containment test needs a full-dimensional polytope")
        return all(f.contains(x) for f in self.facets)

    def contains_strictly(self, x):
        return all(f.value(x) > 0 for f in self.facets)

    def scaled_contains(self, x, k):
        """Membership of ``x`` in the dilate ``k * P``."""
        return all(_dot(f.normal, x) + k * f.offset >= 0 for f in self.facets)

    def vertex_set(self):
        return frozenset(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash((self.ambient_dim, self.vertex_set()))


def _hull_full(points, n):
    """Facets and vertices of a full-dimensional hull of integer points, n in {1,2,3}."""
    facets = set()
    if n == 1:
        xs = [p[0] for p in points]
        lo, hi = min(xs), max(xs)
        facets = {((1,), -lo), ((-1,), hi)}
    elif n == 2:
        for a, b in itertools.combinations(points, 2):
            d = _sub(b, a)
            if d == (0, 0):
                continue
            normal = (-d[1], d[0])
            side = [_dot(normal, _sub(p, a)) for p in points]
            if all(s >= 0 for s in side) or all(s <= 0 for s in side):
                if all(s <= 0 for s in side):
                    normal = (-normal[0], -normal[1])
                normal = _primitive(normal)
                facets.add((normal, -_dot(normal, a)))
    elif n == 3:
        for a, b, c in itertools.combinations(points, 3):
            normal = _cross(_sub(b, a), _sub(c, a))
            if normal == (0, 0, 0):
                continue
            side = [_dot(normal, _sub(p, a)) for p in points]
            pos = all(s >= 0 for s in side)
            neg = all(s <= 0 for s in side)
            if pos or neg:
                if neg:
                    normal = tuple(-x for x in normal)
                normal = _primitive(normal)
                facets.add((normal, -_dot(normal, a)))
    else:
        raise DomainError("facet enumeration supports ambient dimension <= 3")
    facets = sorted(facets)
    vertices = []
    for p in points:
        tight = [nrm for nrm, off in facets if _dot(nrm, p) + off == 0]
        if _rank(tight) == n:
            vertices.append(p)
    return tuple(sorted(set(vertices))), tuple(Facet(nrm, off) for nrm, off in facets)


def convex_hull(points) -> LatticePolytope:
    """Convex hull of rational points with vertex and facet representations."""
    pts = sorted({_norm_point(p) for p in points})
    if not pts:
        raise DomainError("convex hull of an empty point set")
    n = len(pts[0])
    if n > 3:
        raise DomainError("facet enumeration supports ambient dimension <= 3")
    base = pts[0]
    dim = _rank([_sub(p, base) for p in pts[1:]]) if len(pts) > 1 else 0
    if dim == 0:
        return LatticePolytope(n, (pts[0],), (), 0)
    # clear denominators so the facet normals stay integral
    den = reduce(math.lcm, (Fraction(c).denominator for p in pts for c in p), 1)
    ipts = [tuple(int(c * den) for c in p) for p in pts]
    if dim < n:
        # project to coordinates on which the affine dimension is preserved
        for coords in itertools.combinations(range(n), dim):
            proj = [tuple(p[i] for i in coords) for p in ipts]
            if _rank([_sub(q, proj[0]) for q in proj[1:]]) == dim:
                break
        pverts, _ = _hull_full(sorted(set(proj)), dim)
        lookup = {}
        for p, q in zip(ipts, proj):
            lookup.setdefault(q, p)
        verts = [lookup[q] for q in pverts]
        verts = tuple(sorted(_norm_point(Fraction(c, den) for c in v) for v in verts))
        return LatticePolytope(n, verts, (), dim)
    verts, facets = _hull_full(ipts, n)
    verts = tuple(sorted(_norm_point(Fraction(c, den) for c in v) for v in verts))
    facets = tuple(Facet(f.normal, _norm_point([Fraction(f.offset, den)])[0]) for f in facets)
    poly = LatticePolytope(n, verts, facets, n)
    _check_representations(poly)
    return poly


def _check_representations(poly):
    for f in poly.facets:
        if not all(f.contains(v) for v in poly.vertices):
            raise AssertionError("vertex violates a facet inequality")
        tight = [v for v in poly.vertices if f.value(v) == 0]
        if _rank([_sub(v, tight[0]) for v in tight[1:]]) != poly.ambient_dim - 1:
            raise AssertionError("facet is not supported by enough vertices")


def newton_polytope(phi) -> LatticePolytope:
    """Convex hull of the exponent vectors of the nonzero terms of ``phi``."""
    if not phi.terms:
        raise DomainError("the zero polynomial has no Newton polytope")
    return convex_hull(phi.terms.keys())


def polar_dual(P: LatticePolytope) -> LatticePolytope:
    """``{y : <x, y> >= -1 for all x in P}``; may have rational vertices."""
    if not P.is_full_dimensional:
        raise DomainError("polar dual needs a full-dimensional polytope")
    if not all(f.offset > 0 for f in P.facets):
        raise DomainError("origin is not strictly interior")
    verts = [tuple(Fraction(c) / f.offset for c in f.normal) for f in P.facets]
    return convex_hull(verts)


def is_reflexive(P: LatticePolytope) -> bool:
    if not P.is_full_dimensional:
        raise DomainError("reflexivity needs a full-dimensional polytope")
    if not P.is_lattice:
        return False
    if not all(f.offset > 0 for f in P.facets):
        return False
    reflexive = all(f.offset == 1 for f in P.facets)
    if reflexive:
        assert interior_lattice_points(P) == [tuple([0] * P.ambient_dim)]
    return reflexive


def _ordered_face(points, normal):
    """Order coplanar 3d points cyclically around their centroid."""
    # drop the coordinate with the largest normal component
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]
    cx = sum(Fraction(p[keep[0]]) for p in points) / len(points)
    cy = sum(Fraction(p[keep[1]]) for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[keep[1]] - cy), float(p[keep[0]] - cx)))


def normalized_volume(P: LatticePolytope) -> int:
    """``n! * vol(P)``, computed exactly from a triangulation."""
    if not P.is_full_dimensional:
        raise DomainError("normalized volume of a degenerate polytope")
    n = P.ambient_dim
    verts = list(P.vertices)
    if n == 1:
        total = max(v[0] for v in verts) - min(v[0] for v in verts)
    elif n == 2:
        cyc = _ordered_face([(v[0], v[1], 0) for v in verts], (0, 0, 1))
        total = abs(sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(cyc, cyc[1:] + cyc[:1])))
    else:
        apex = verts[0]
        total = 0
        for f in P.facets:
            face = [v for v in verts if f.value(v) == 0]
            if apex in face:
                continue
            cyc = _ordered_face(face, f.normal)
            a = cyc[0]
            for b, c in zip(cyc[1:], cyc[2:]):
                m = (_sub(a, apex), _sub(b, apex), _sub(c, apex))
                total += abs(_dot(m[0], _cross(m[1], m[2])))
    total = Fraction(total)
    if total.denominator != 1:
        return total
    return int(total)


def lattice_points(P: LatticePolytope):
    """All integer points of a full-dimensional polytope (bounding-box filter)."""
    if not P.is_full_dimensional:
        raise DomainError("lattice point enumeration needs a full-dimensional polytope")
    n = P.ambient_dim
    lo = [math.floor(min(v[i] for v in P.vertices)) for i in range(n)]
    hi = [math.ceil(max(v[i] for v in P.vertices)) for i in range(n)]
    return [p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))) if P.contains(p)]


def interior_lattice_points(P: LatticePolytope):
    return [p for p in lattice_points(P) if P.contains_strictly(p)]


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    return convex_hull(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


# ---------------------------------------------------------------------------
# temperedness in two variables


def _poly_divmod(num, den):
    """Exact division of integer polynomials (coefficient lists, low degree first)."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            return None, num
        c //= lead
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def _totient(k):
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


_CYCLO_CACHE = {}


def cyclotomic_polynomial(k):
    """Coefficients (low degree first) of the k-th cyclotomic polynomial."""
    if k in _CYCLO_CACHE:
        return _CYCLO_CACHE[k]
    poly = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not rem
    _CYCLO_CACHE[k] = poly
    return poly


def is_cyclotomic_product(coeffs):
    """True iff ``sum c_j z^j`` is a constant times a product of cyclotomic polynomials."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        return False
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    if any(c.denominator != 1 for c in monic):
        return False
    poly = [int(c) for c in monic]
    deg = len(poly) - 1
    if deg == 0:
        return True
    # phi(k) >= sqrt(k/2) bounds the index of any cyclotomic factor
    for k in range(1, 2 * deg ** 4 + 1):
        if _totient(k) > len(poly) - 1:
            continue
        cyc = cyclotomic_polynomial(k)
        while len(poly) > 1:
            q, rem = _poly_divmod(poly, cyc)
            if q is None or rem:
                break
            poly = q
        if len(poly) == 1:
            break
    return poly == [1]


@dataclass(frozen=True)
class EdgeReport:
    start: tuple
    end: tuple
    coefficients: tuple
    cyclotomic: bool


@dataclass(frozen=True)
class TemperednessReport:
    tempered: bool
    edges: tuple

    def __bool__(self):
        return self.tempered


def _polygon_cycle(P):
    verts = list(P.vertices)
    return _ordered_face([(v[0], v[1], 0) for v in verts], (0, 0, 1))


def is_tempered_2d(phi) -> TemperednessReport:
    """Edge-polynomial test: every edge polynomial must be cyclotomic."""
    if phi.num_vars != 2:
        raise DomainError("temperedness test is implemented for two variables only")
    P = newton_polytope(phi)
    if not P.is_full_dimensional or not is_reflexive(P):
        raise DomainError("Newton polygon is not reflexive")
    cyc = [(v[0], v[1]) for v in _polygon_cycle(P)]
    edges = []
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        d = _sub(b, a)
        g = math.gcd(abs(d[0]), abs(d[1]))
        step = (d[0] // g, d[1] // g)
        coeffs = tuple(phi.terms.get((a[0] + j * step[0], a[1] + j * step[1]), Fraction(0)) for j in range(g + 1))
        edges.append(EdgeReport(a, b, coeffs, is_cyclotomic_product(coeffs)))
    return TemperednessReport(all(e.cyclotomic for e in edges), tuple(edges))
