import json
from fractions import Fraction

import mpmath
import pytest

from apery import casebook
from apery.algebraic import AlgebraicNumber
from apery.casebook import (
    REPORT_KEYS,
    VerifyOptions,
    case_ids,
    evaluate_expression,
    get_case,
    load_case,
    parse_case,
    verify_case,
)
from apery.errors import CaseFormatError, CaseLoadError, DomainError
from apery.sequences import apery_limit, solve_homogeneous, solve_inhomogeneous

FANO = ("v10", "v12", "v14", "v16", "v18")
POLYGONS = tuple(f"poly{i}" for i in range(1, 7))


def test_registry_complete():
    ids = set(case_ids())
    assert ids == set(FANO) | {"a2", "a3", "b3", "p2-elliptic"} | set(POLYGONS)
    for cid in ids:
        assert get_case(cid).id == cid


def test_loaded_examples():
    v12 = get_case("v12")
    assert v12.expected_limit == "1/6 * zeta3"
    assert v12.kind == "fano" and v12.num_vars == 3
    a2 = get_case("a2")
    assert a2.recurrence_only
    assert a2.expected_operator.to_text() == "D^2 - 3 * t - 11 * t * D - 11 * t * D^2 - t^2 - 2 * t^2 * D - t^2 * D^2"
    assert a2.expected_sequence[:5] == tuple(map(Fraction, (1, 3, 19, 147, 1251)))
    assert get_case("p2-elliptic").stride == 3
    assert get_case("v16").metadata_kappa() == AlgebraicNumber(32)
    assert get_case("v18").metadata_kappa() == AlgebraicNumber.parse("9*sqrt(-3)")


def test_unknown_case():
    with pytest.raises(KeyError):
        get_case("v22")


GOOD = """
[case]
id = demo
kind = recurrence
[operator]
D^2 - 3 * t - 11 * t * D - 11 * t * D^2 - t^2 - 2 * t^2 * D - t^2 * D^2
[expect]
sequence = 1 3 19
limit = 1/5 * zeta2
"""


def test_parse_minimal_case():
    spec = parse_case(GOOD, "demo.case")
    assert spec.id == "demo" and spec.has_limit and spec.recurrence_only


@pytest.mark.parametrize("text,where", [
    ("[case]\nid = x\n[bogus]\n", "demo.case:3"),
    ("id = x\n", "demo.case:1"),
    ("[case]\nid = x\nkind = quintic\n[operator]\nD\n", "demo.case:3"),
    ("[case]\nid = x\nnum_vars = 2\n[phi]\n1 0\n", "demo.case:5"),
    ("[case]\nid = x\n[operator]\nD^2 - t*\n", "demo.case:4"),
    ("[case]\nid = x\n[operator]\nD - t\n[expect]\nlimit = zeta7\n", "demo.case:6"),
    ("[case]\nid = x\n[operator]\nD - t\n[metadata]\nD_N = twelve\n", "demo.case:6"),
])
def test_malformed_case_reports_line(text, where):
    with pytest.raises(CaseFormatError, match=where):
        parse_case(text, "demo.case")


def test_case_needs_content():
    with pytest.raises(CaseFormatError):
        parse_case("[case]\nid = x\n", "demo.case")


@pytest.mark.parametrize("text,check", [
    (GOOD.replace("1 3 19", "1 3 20"), "sequence-prefix"),
    ("[case]\nid = x\nnum_vars = 2\n[phi]\n1 1 0\n1 0 1\n1 -1 -1\n[operator]\nD^2 - t\n", "operator-annihilates"),
    ("[case]\nid = x\n[operator]\nD^2 - 2 * D - t\n", "operator-solvable"),
    (GOOD + "[metadata]\nD_N = 12\nr_N = 1\nkappa = 11\n", "metadata-kappa"),
    ("[case]\nid = x\nkind = polygon\nnum_vars = 2\n[phi]\n1 2 0\n1 0 1\n1 -1 -1\n", "polygon-reflexive"),
])
def test_on_load_checks_name_the_failure(text, check):
    with pytest.raises(CaseLoadError, match=check):
        parse_case(text, "demo.case")
    parse_case(text, "demo.case", check=False)


def test_load_case_from_file(tmp_path):
    p = tmp_path / "demo.case"
    p.write_text(GOOD)
    assert load_case(p).id == "demo"
    with pytest.raises(CaseFormatError):
        load_case(tmp_path / "missing.case")


def test_evaluate_expression():
    with mpmath.workprec(128):
        assert abs(evaluate_expression("1/3 * L_chi3_3", 128) - evaluate_expression("4/243 * pi3_sqrt3", 128)) < mpmath.mpf(10) ** -35
        assert evaluate_expression("4/27 * pi**3 * i", 128).imag > 4.59
        assert abs(evaluate_expression("sqrt(-3) ** 2", 128) + 3) < 1e-30
    for bad in ("__import__('os')", "zeta2.real", "zeta7", "[1]", "f(2)"):
        with pytest.raises(DomainError):
            evaluate_expression(bad, 64)


def test_b3_and_v10_agree():
    b3, v10 = get_case("b3"), get_case("v10")
    assert b3.expected_operator == v10.expected_operator
    assert list(v10.period_sequence(20)) == list(solve_homogeneous(b3.expected_operator, 20))
    L = b3.expected_operator
    alpha = apery_limit(solve_homogeneous(L, 200), solve_inhomogeneous(L, [0, 1], 200), 256).value
    with mpmath.workprec(256):
        assert abs(alpha - evaluate_expression(v10.expected_limit, 256)) < mpmath.mpf(10) ** -50


FAST = VerifyOptions(terms=200, precision=256)


def test_report_json_is_deterministic():
    r1 = verify_case("a3", FAST).to_json()
    casebook._SEQ_CACHE.clear()
    r2 = verify_case("a3", FAST).to_json()
    assert r1 == r2
    doc = json.loads(r1)
    assert set(doc) == REPORT_KEYS and doc["passed"]
    assert "timings" not in doc
    assert "timings" in verify_case("a3", FAST).to_dict(timings=True)


def test_verify_v16():
    rep = verify_case("v16", FAST)
    assert rep.passed, rep.failed_checks()
    assert rep.kappa["exact"] == "32" and rep.kappa["source"] == "metadata"
    assert rep.recognized == "7/32 * zeta3"
    assert rep.normal_conifold is True
    names = [c.name for c in rep.checks]
    assert "central-equality" in names and "limit-expected" in names


def test_verify_elliptic_skips_limit():
    rep = verify_case("p2-elliptic", FAST)
    assert rep.passed, rep.failed_checks()
    assert "limit" in rep.skipped and rep.limit is None


@pytest.mark.parametrize("cid", POLYGONS)
def test_polygon_reports(cid):
    rep = verify_case(cid)
    case = get_case(cid)
    assert rep.passed, rep.failed_checks()
    assert rep.polytope["reflexive"] is True
    assert rep.polytope["tempered"] is case.tempered
    assert rep.sequence == [] and rep.fitted_operator is None
