import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from apery.errors import DomainError
from apery.lattice import (
    convex_hull,
    cyclotomic_polynomial,
    interior_lattice_points,
    is_cyclotomic_product,
    is_reflexive,
    is_tempered_2d,
    lattice_points,
    minkowski_sum,
    newton_polytope,
    normalized_volume,
    polar_dual,
)
from apery.laurent import LaurentPolynomial, multiply
from apery.casebook import get_case

from properties import REFLEXIVE_SEEDS, apply_matrix, check_polar_involution, small_laurent_2d, unimodular_matrices

TRIANGLE = [(1, 0), (0, 1), (-1, -1)]


def lp(terms, n=2):
    return LaurentPolynomial(n, terms)


def test_newton_triangle():
    P = newton_polytope(lp({(1, 0): 1, (0, 1): 1, (-1, -1): 1}))
    assert set(P.vertices) == set(TRIANGLE)
    assert P.is_full_dimensional
    for f in P.facets:
        assert all(f.contains(v) for v in P.vertices)


def test_newton_constant_is_a_point():
    P = newton_polytope(LaurentPolynomial.constant(3, 7))
    assert P.vertices == ((0, 0, 0),)
    assert P.dim == 0


def test_newton_zero_polynomial():
    with pytest.raises(DomainError):
        newton_polytope(LaurentPolynomial(2, {}))


def _in_simplex_hull(p, others):
    """Exact Caratheodory test: is p a convex combination of at most 4 of ``others``?"""
    for k in range(1, 5):
        for sub in itertools.combinations(others, k):
            # solve sum l_i s_i = p, sum l_i = 1 by least squares on exact rationals
            rows = [[Fraction(s[c]) for s in sub] + [Fraction(p[c])] for c in range(3)]
            rows.append([Fraction(1)] * k + [Fraction(1)])
            sol = _solve_exact(rows, k)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def _solve_exact(rows, k):
    rows = [r[:] for r in rows]
    piv = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            return None
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    return [rows[i][-1] / rows[i][i] for i in range(k)]


def test_v10_vertices_against_caratheodory_oracle():
    phi = get_case("v10").phi
    support = sorted(phi.terms)
    expect = {p for p in support if not _in_simplex_hull(p, [q for q in support if q != p])}
    P = newton_polytope(phi)
    assert set(P.vertices) == expect
    assert is_reflexive(P)


@pytest.mark.parametrize("case", ["v10", "v12", "v14", "v16", "v18"])
def test_fano_newton_polytopes_reflexive(case):
    P = newton_polytope(get_case(case).phi)
    assert P.is_full_dimensional and is_reflexive(P)
    assert interior_lattice_points(P) == [(0, 0, 0)]


def test_polar_of_triangle():
    P = convex_hull(TRIANGLE)
    Q = polar_dual(P)
    assert set(Q.vertices) == {(2, -1), (-1, 2), (-1, -1)}
    assert polar_dual(Q) == P


def test_polar_of_square_is_cross_polytope():
    Q = polar_dual(convex_hull([(1, 1), (1, -1), (-1, 1), (-1, -1)]))
    assert set(Q.vertices) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_polar_requires_interior_origin():
    with pytest.raises(DomainError):
        polar_dual(convex_hull([(0, 0), (1, 0), (0, 1)]))


def test_scaled_triangle_not_reflexive():
    P = convex_hull([(2, 0), (0, 2), (-2, -2)])
    assert not is_reflexive(P)
    Q = polar_dual(P)
    assert not Q.is_lattice


@pytest.mark.parametrize("pts,vol", [
    (TRIANGLE, 3),
    ([(0, 0), (1, 0), (0, 1)], 1),
    ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 1),
    ([(1, 1), (1, -1), (-1, 1), (-1, -1)], 8),
    ([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)], 6),
])
def test_normalized_volume(pts, vol):
    assert normalized_volume(convex_hull(pts)) == vol


def test_normalized_volume_degenerate():
    with pytest.raises(DomainError):
        normalized_volume(convex_hull([(0, 0), (1, 1), (2, 2)]))


def test_rational_hull_and_lower_dimensional_hull():
    P = convex_hull([(Fraction(1, 2), 0), (0, Fraction(1, 2)), (-1, -1)])
    assert not P.is_lattice
    seg = convex_hull([(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert seg.dim == 1 and set(seg.vertices) == {(0, 0, 0), (2, 2, 2)}


def test_lattice_points_of_triangle():
    pts = lattice_points(convex_hull(TRIANGLE))
    assert sorted(pts) == sorted(TRIANGLE + [(0, 0)])


@pytest.mark.parametrize("k,coeffs", [
    (1, [-1, 1]), (2, [1, 1]), (3, [1, 1, 1]), (4, [1, 0, 1]), (6, [1, -1, 1]), (12, [1, 0, -1, 0, 1]),
])
def test_cyclotomic_polynomials(k, coeffs):
    assert cyclotomic_polynomial(k) == coeffs


@pytest.mark.parametrize("coeffs,expect", [
    ([1, 1], True), ([1, 0, 1], True), ([1, 0, 0, 1], True), ([2, 2], True), ([1, 2, 1], True),
    ([16, -3], False), ([1, 3, 1], False), ([1, 2, 5, 13], False), ([1, -3, 3, -1], True),
])
def test_is_cyclotomic_product(coeffs, expect):
    assert is_cyclotomic_product(coeffs) is expect


@pytest.mark.parametrize("case,expect", [
    ("poly1", True), ("poly2", False), ("poly3", True), ("poly4", True), ("poly5", False), ("poly6", True),
])
def test_temperedness_table(case, expect):
    rep = is_tempered_2d(get_case(case).phi)
    assert rep.tempered is expect
    assert len(rep.edges) >= 3


def test_tempered_requires_two_variables():
    with pytest.raises(DomainError):
        is_tempered_2d(get_case("v12").phi)
    with pytest.raises(DomainError):
        is_tempered_2d(lp({(2, 0): 1, (0, 2): 1, (-2, -2): 1}))


@settings(max_examples=60)
@given(st.sampled_from(REFLEXIVE_SEEDS), unimodular_matrices())
def test_polar_involution_property(seed, m):
    check_polar_involution(apply_matrix(m, seed))


@settings(max_examples=60)
@given(st.sampled_from(REFLEXIVE_SEEDS), unimodular_matrices())
def test_reflexive_interior_is_origin(seed, m):
    P = convex_hull(apply_matrix(m, seed))
    assert is_reflexive(P)
    assert interior_lattice_points(P) == [(0, 0)]


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7), unimodular_matrices())
def test_volume_unimodular_invariance(pts, m):
    P = convex_hull(pts)
    if not P.is_full_dimensional:
        return
    assert normalized_volume(convex_hull(apply_matrix(m, pts))) == normalized_volume(P)


@settings(max_examples=60)
@given(small_laurent_2d(), small_laurent_2d())
def test_newton_of_product_is_minkowski_sum(f, g):
    fg = multiply(f, g)
    if fg.is_zero():
        return
    hull_of_sums = convex_hull([tuple(a + b for a, b in zip(p, q)) for p in f.terms for q in g.terms])
    assert newton_polytope(fg) == hull_of_sums
    assert minkowski_sum(newton_polytope(f), newton_polytope(g)) == hull_of_sums
