"""Registry of case files and the end-to-end verification pipeline.

A case file is a line-oriented UTF-8 document with sections ``[case]``,
``[phi]``, ``[operator]``, ``[expect]`` and ``[metadata]``::

    [case]
    id = v12
    num_vars = 3
    thnf_method = quadrature-3d

    [phi]
    # coeff  e1 e2 e3
    -1  -1 -1 -1
    ...

    [operator]
    D^3 - 34 * t * D^3 - ...

    [expect]
    sequence = 1 5 73 1445
    limit = 1/6 * zeta3

Expected values are symbolic expressions in the labels of the constant basis
(``zeta2``, ``zeta3``, ``pi3_sqrt3``, ``L_chi3_3``, ``log2``), ``pi``, ``i`` and
``sqrt(n)``.
"""
from __future__ import annotations

import ast
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import mpmath

from .algebraic import AlgebraicNumber
from .diffop import DiffOperator, apply_to_series, local_exponents, singular_locus
from .errors import AmbiguousFit, CaseFormatError, CaseLoadError, DomainError, Obstructed
from .lattice import is_reflexive, is_tempered_2d, newton_polytope, normalized_volume
from .laurent import LaurentPolynomial, RationalSequence, constant_term_sequence
from .numerics import thnf
from .numerics.constants import named_constant
from .opfit import fit_operator
from .recognize import BASIS_LABELS, default_basis, recognize_constant
from .sequences import (
    apery_limit,
    inhomogeneous_constant,
    normalize_thnf,
    solve_homogeneous,
    solve_inhomogeneous,
)

__all__ = [
    "CaseSpec",
    "AperyReport",
    "Check",
    "VerifyOptions",
    "load_case",
    "parse_case",
    "get_case",
    "case_ids",
    "verify_case",
    "evaluate_expression",
    "CASES_DIR",
]

CASES_DIR = Path(__file__).with_name("cases")
THNF_METHODS = ("quadrature-2d", "quadrature-3d", "closed-form-1d", "contour", "none")
KINDS = ("fano", "recurrence", "elliptic", "polygon")
LOAD_CHECK_TERMS = 25


# --- symbolic expected values ------------------------------------------------

_NAMED = {"zeta2", "zeta3", "pi3_sqrt3", "L_chi3_3", "log2", "pi"}


def evaluate_expression(text: str, prec: int = 256):
    """Evaluate an expected-value expression at ``prec`` bits (real or complex mpmath value)."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            if isinstance(node.value, float):
                return mpmath.mpf(repr(node.value))
            return mpmath.mpf(node.value)
        if isinstance(node, ast.Name):
            if node.id in _NAMED:
                return named_constant(node.id, prec).value
            if node.id == "i":
                return mpmath.mpc(0, 1)
            if node.id == "one":
                return mpmath.mpf(1)
            raise DomainError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            ops = {ast.Add: lambda: a + b, ast.Sub: lambda: a - b, ast.Mult: lambda: a * b,
                   ast.Div: lambda: a / b, ast.Pow: lambda: a ** b}
            for op, f in ops.items():
                if isinstance(node.op, op):
                    return f()
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            arg = node.args[0]
            neg = isinstance(arg, ast.UnaryOp) and isinstance(arg.op, ast.USub)
            inner = arg.operand if neg else arg
            if isinstance(inner, ast.Constant) and isinstance(inner.value, int):
                root = named_constant(f"sqrt({inner.value})", prec).value
                return mpmath.mpc(0, root) if neg else root
            raise DomainError(f"sqrt takes an integer literal in {text!r}")
        raise DomainError(f"unsupported syntax in {text!r}")

    with mpmath.workprec(prec + 16):
        val = ev(tree)
    with mpmath.workprec(prec):
        return +val


# --- case files ---------------------------------------------------------------

@dataclass
class CaseSpec:
    id: str
    title: str = ""
    kind: str = "fano"
    num_vars: int | None = None
    phi: LaurentPolynomial | None = None
    stride: int = 1
    expected_operator: DiffOperator | None = None
    expected_limit: str | None = None
    expected_sequence: tuple = ()
    expected_values: dict = field(default_factory=dict)
    thnf_method: str = "none"
    region: str | None = None
    metadata: dict = field(default_factory=dict)
    tempered: bool | None = None
    source: str | None = None

    @property
    def recurrence_only(self):
        return self.phi is None

    @property
    def polytope_only(self):
        return self.kind == "polygon"

    @property
    def has_limit(self):
        return self.expected_limit is not None

    def metadata_kappa(self):
        """``D_N / r_N`` when both are recorded, else the recorded ``kappa``, else None."""
        md = self.metadata
        if "D_N" in md and "r_N" in md:
            return AlgebraicNumber(md["D_N"]) / md["r_N"]
        return md.get("kappa")

    def period_sequence(self, K: int, prune: bool = True) -> RationalSequence:
        """``u_m = [phi^(stride*m)]_0`` for ``m = 0..K``."""
        if self.phi is None:
            raise DomainError(f"case {self.id} has no Laurent polynomial")
        return _period_sequence(self, K, prune)


_SEQ_CACHE = {}


def _period_sequence(case, K, prune):
    key = (case.id, tuple(sorted(case.phi.terms.items())), case.stride, prune)
    cached = _SEQ_CACHE.get(key)
    if cached is not None and len(cached) > K:
        return RationalSequence(cached[: K + 1])
    top = case.stride * K
    P = newton_polytope(case.phi) if prune else None
    a = constant_term_sequence(case.phi, top, prune=P)
    u = RationalSequence(a[:: case.stride])
    _SEQ_CACHE[key] = u
    return u


_SECTIONS = ("case", "phi", "operator", "expect", "metadata")
_CASE_KEYS = {"id", "title", "kind", "num_vars", "stride", "thnf_method", "region", "tempered"}
_META_KEYS = {"D_N", "M_N", "r_N", "kappa"}


def _fail(where, msg):
    raise CaseFormatError(f"{where}: {msg}")


def parse_case(text: str, source: str = "<string>", check: bool = True) -> CaseSpec:
    """Parse case-file text; with ``check`` the on-load invariants are enforced."""
    sections = {name: [] for name in _SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if line.startswith("["):
            if not line.endswith("]") or line[1:-1].strip() not in _SECTIONS:
                _fail(where, f"unknown section header {line!r}")
            current = line[1:-1].strip()
            if sections[current]:
                _fail(where, f"duplicate section [{current}]")
            continue
        if current is None:
            _fail(where, "content before the first section header")
        sections[current].append((where, line))

    def keyvals(name, allowed=None):
        out = {}
        for where, line in sections[name]:
            if "=" not in line:
                _fail(where, f"expected 'key = value' in [{name}]")
            k, v = (s.strip() for s in line.split("=", 1))
            if not k or not v:
                _fail(where, f"empty key or value in [{name}]")
            if allowed is not None and k not in allowed:
                _fail(where, f"unknown key {k!r} in [{name}]")
            if k in out:
                _fail(where, f"duplicate key {k!r}")
            out[k] = (where, v)
        return out

    head = keyvals("case", _CASE_KEYS)
    if "id" not in head:
        raise CaseFormatError(f"{source}: [case] must define id")
    spec = CaseSpec(id=head["id"][1], source=source)
    spec.title = head.get("title", ("", ""))[1]
    if "kind" in head:
        where, v = head["kind"]
        if v not in KINDS:
            _fail(where, f"kind must be one of {KINDS}")
        spec.kind = v
    for key in ("num_vars", "stride"):
        if key in head:
            where, v = head[key]
            try:
                n = int(v)
            except ValueError:
                _fail(where, f"{key} must be an integer")
            if n < 1:
                _fail(where, f"{key} must be positive")
            setattr(spec, key, n)
    if "thnf_method" in head:
        where, v = head["thnf_method"]
        if v not in THNF_METHODS:
            _fail(where, f"thnf_method must be one of {THNF_METHODS}")
        spec.thnf_method = v
    if "region" in head:
        where, v = head["region"]
        if v not in thnf.REGIONS:
            _fail(where, f"unknown region {v!r}")
        spec.region = v
    if "tempered" in head:
        where, v = head["tempered"]
        if v not in ("yes", "no"):
            _fail(where, "tempered must be yes or no")
        spec.tempered = v == "yes"

    if sections["phi"]:
        rows = []
        for where, line in sections["phi"]:
            fields = line.split()
            try:
                coeff = Fraction(fields[0])
                exps = tuple(int(e) for e in fields[1:])
            except (ValueError, ZeroDivisionError, IndexError):
                _fail(where, f"bad monomial line {line!r}")
            if spec.num_vars is None:
                spec.num_vars = len(exps)
            if len(exps) != spec.num_vars:
                _fail(where, f"monomial has {len(exps)} exponents, expected {spec.num_vars}")
            rows.append((coeff, exps))
        spec.phi = LaurentPolynomial.from_terms(rows, spec.num_vars)
        if spec.phi.is_zero():
            raise CaseFormatError(f"{source}: [phi] sums to zero")

    if sections["operator"]:
        text_op = " ".join(line for _, line in sections["operator"])
        try:
            spec.expected_operator = DiffOperator.parse(text_op)
        except DomainError as exc:
            _fail(sections["operator"][0][0], str(exc))

    expect = keyvals("expect")
    for key, (where, v) in expect.items():
        if key == "sequence":
            try:
                spec.expected_sequence = tuple(Fraction(x) for x in v.split())
            except (ValueError, ZeroDivisionError):
                _fail(where, "sequence must be a list of rationals")
        elif key == "limit":
            spec.expected_limit = v
        elif key == "kappa":
            try:
                spec.expected_values["kappa"] = AlgebraicNumber.parse(v)
            except DomainError as exc:
                _fail(where, str(exc))
        else:
            spec.expected_values[key] = v
        if key not in ("sequence", "kappa"):
            try:
                evaluate_expression(v, 64)
            except DomainError as exc:
                _fail(where, str(exc))

    meta = keyvals("metadata", _META_KEYS)
    for key, (where, v) in meta.items():
        try:
            if key == "D_N":
                spec.metadata[key] = int(v)
            elif key == "M_N":
                spec.metadata[key] = Fraction(v)
            else:
                spec.metadata[key] = AlgebraicNumber.parse(v)
        except (ValueError, ZeroDivisionError, DomainError):
            _fail(where, f"bad value for {key}")

    if spec.kind == "polygon" and spec.phi is None:
        raise CaseFormatError(f"{source}: polygon fixtures need [phi]")
    if spec.phi is None and spec.expected_operator is None:
        raise CaseFormatError(f"{source}: a case needs [phi] or [operator]")
    if check:
        _on_load_checks(spec)
    return spec


def _on_load_checks(spec: CaseSpec):
    def fail(name, msg):
        raise CaseLoadError(f"{spec.source}: check '{name}' failed: {msg}")

    L = spec.expected_operator
    n = LOAD_CHECK_TERMS
    if spec.phi is not None and L is not None:
        u = spec.period_sequence(n - 1)
        if any(apply_to_series(L, u)):
            fail("operator-annihilates", f"the operator does not annihilate the first {n} period terms")
    elif L is not None:
        try:
            u = solve_homogeneous(L, n - 1)
        except (DomainError, Obstructed) as exc:
            fail("operator-solvable", str(exc))
    else:
        u = None
    if spec.expected_sequence and u is not None:
        k = min(len(u), len(spec.expected_sequence))
        if list(u[:k]) != list(spec.expected_sequence[:k]):
            fail("sequence-prefix", f"expected {list(map(str, spec.expected_sequence[:k]))}, computed {list(map(str, u[:k]))}")
    md = spec.metadata
    if "D_N" in md and "r_N" in md and "kappa" in md:
        if AlgebraicNumber(md["D_N"]) / md["r_N"] != md["kappa"]:
            fail("metadata-kappa", "kappa differs from D_N / r_N")
    exp_kappa = spec.expected_values.get("kappa")
    if exp_kappa is not None and spec.metadata_kappa() is not None and exp_kappa != spec.metadata_kappa():
        fail("metadata-kappa", "expected kappa differs from the metadata value")
    if spec.kind == "polygon":
        if spec.num_vars != 2:
            fail("polygon-dimension", "polygon fixtures must have two variables")
        if not is_reflexive(newton_polytope(spec.phi)):
            fail("polygon-reflexive", "Newton polygon is not reflexive")


def load_case(path) -> CaseSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CaseFormatError(f"{path}: cannot read ({exc})") from exc
    return parse_case(text, str(path))


def case_ids():
    """Registered case ids in a fixed order."""
    return tuple(sorted(p.stem for p in CASES_DIR.glob("*.case")))


@lru_cache(maxsize=None)
def get_case(case_id: str) -> CaseSpec:
    path = CASES_DIR / f"{case_id}.case"
    if not path.exists():
        raise KeyError(f"unknown case {case_id!r}; known: {', '.join(case_ids())}")
    spec = load_case(path)
    if spec.id != case_id:
        raise CaseLoadError(f"{path}: id {spec.id!r} does not match the file name")
    return spec


# --- verification ---------------------------------------------------------------

@dataclass
class VerifyOptions:
    terms: int = 500
    precision: int = 256
    period_terms: int = 30
    fit_guard: int = 10
    digits: int = 30
    tolerance: float = 1e-20
    recognition_digits: int = 60
    max_height: int = 10 ** 4
    full_3d: bool = False


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AperyReport:
    case: str
    sequence: list = field(default_factory=list)
    fitted_operator: str | None = None
    singular_points: list = field(default_factory=list)
    normal_conifold: bool | None = None
    exponents: dict = field(default_factory=dict)
    b_sequence: list = field(default_factory=list)
    limit: dict | None = None
    thnf: dict = field(default_factory=dict)
    kappa: dict | None = None
    v_hat0: object = None
    recognized: str | None = None
    polytope: dict | None = None
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failed_checks(self):
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self, timings: bool = False):
        out = {
            "case": self.case,
            "passed": self.passed,
            "sequence": self.sequence,
            "fitted_operator": self.fitted_operator,
            "singular_points": self.singular_points,
            "normal_conifold": self.normal_conifold,
            "exponents": self.exponents,
            "b_sequence": self.b_sequence,
            "limit": self.limit,
            "thnf": self.thnf,
            "kappa": self.kappa,
            "v_hat0": self.v_hat0,
            "recognized": self.recognized,
            "polytope": self.polytope,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "skipped": self.skipped,
        }
        if timings:
            out["timings"] = self.timings
        return out

    def to_json(self, timings: bool = False):
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


REPORT_KEYS = frozenset(AperyReport("x").to_dict().keys())

_KEY_TYPES = {
    "case": str, "passed": bool, "sequence": list, "fitted_operator": (str, type(None)),
    "singular_points": list, "normal_conifold": (bool, type(None)), "exponents": dict,
    "b_sequence": list, "limit": (dict, type(None)), "thnf": dict, "kappa": (dict, type(None)),
    "v_hat0": (str, dict, type(None)), "recognized": (str, type(None)), "polytope": (dict, type(None)),
    "checks": list, "skipped": list, "timings": dict,
}


def validate_report(doc: dict):
    """Raise ValueError unless ``doc`` has the report keys with the documented types."""
    missing = REPORT_KEYS - set(doc)
    extra = set(doc) - REPORT_KEYS - {"timings"}
    if missing or extra:
        raise ValueError(f"report keys differ: missing {sorted(missing)}, unexpected {sorted(extra)}")
    for key, value in doc.items():
        if not isinstance(value, _KEY_TYPES[key]):
            raise ValueError(f"report field {key!r} has type {type(value).__name__}")
    for c in doc["checks"]:
        if set(c) != {"name", "passed", "detail"} or not isinstance(c["passed"], bool):
            raise ValueError(f"malformed check entry {c!r}")
    if doc["passed"] != all(c["passed"] for c in doc["checks"]):
        raise ValueError("passed flag disagrees with the checks")


def _num(x, digits):
    """Deterministic decimal text for a real or complex mpmath value."""
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        return {"re": mpmath.nstr(x.real, digits, min_fixed=-math.inf, max_fixed=math.inf),
                "im": mpmath.nstr(x.imag, digits, min_fixed=-math.inf, max_fixed=math.inf)}
    return mpmath.nstr(x, digits, min_fixed=-math.inf, max_fixed=math.inf)


def _err(x):
    return mpmath.nstr(mpmath.mpmathify(x), 3)


def _exp_text(e):
    return str(e)


def verify_case(case: CaseSpec | str, options: VerifyOptions | None = None) -> AperyReport:
    """Run every stage that applies to ``case`` and collect the results.

    A stage failure is recorded as a failed check; later stages run when the
    data they depend on is available.
    """
    if isinstance(case, str):
        case = get_case(case)
    opt = options or VerifyOptions()
    rep = AperyReport(case.id)
    digits = int(opt.precision * math.log10(2))
    tol = mpmath.mpf(opt.tolerance)

    def check(name, ok, detail=""):
        rep.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def timed(stage, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            rep.timings[stage] = round(time.perf_counter() - t0, 3)

    if case.polytope_only:
        timed("polytope", lambda: _polytope_stage(case, rep, check))
        return rep

    with mpmath.workprec(opt.precision):
        L = case.expected_operator
        u = None
        # (1) period sequence
        if case.recurrence_only:
            rep.skipped.append("periods")
        else:
            u = timed("periods", lambda: case.period_sequence(opt.period_terms - 1))
            rep.sequence = [str(x) for x in u]
            if case.expected_sequence:
                k = min(len(u), len(case.expected_sequence))
                check("sequence-prefix", list(u[:k]) == list(case.expected_sequence[:k]))
        # (2) operator fit
        if L is not None:
            L = timed("fit", lambda: _fit_stage(case, L, u, opt, rep, check))
        else:
            rep.skipped.append("fit")
        if L is None:
            return rep
        # (3) singular locus and local exponents
        timed("local", lambda: _local_stage(L, rep, check, digits))
        if not case.has_limit:
            rep.skipped.extend(["limit", "thnf", "kappa", "v_hat0", "central", "recognize"])
            return rep
        # (4) Apery limit
        a, b, alpha = timed("limit", lambda: _limit_stage(case, L, u, opt, rep, check, digits))
        # (5)-(8) normal function side
        if case.thnf_method == "none":
            rep.skipped.extend(["thnf", "kappa", "v_hat0", "central"])
        else:
            timed("thnf", lambda: _thnf_stage(case, L, alpha, opt, rep, check, digits, tol))
        # (9) recognition
        timed("recognize", lambda: _recognize_stage(case, a, b, opt, rep, check))
    return rep


def _polytope_stage(case, rep, check):
    P = newton_polytope(case.phi)
    refl = is_reflexive(P)
    info = {"vertices": [list(v) for v in sorted(P.vertices)], "reflexive": refl}
    if P.is_full_dimensional:
        info["normalized_volume"] = normalized_volume(P)
    check("reflexive", refl)
    if refl and case.num_vars == 2:
        tr = is_tempered_2d(case.phi)
        info["tempered"] = tr.tempered
        info["edges"] = [{"edge": [list(e.start), list(e.end)], "polynomial": [str(c) for c in e.coefficients],
                          "cyclotomic": e.cyclotomic} for e in tr.edges]
        if case.tempered is not None:
            check("tempered", tr.tempered == case.tempered, f"expected {'yes' if case.tempered else 'no'}")
    rep.polytope = info


def _fit_stage(case, L, u, opt, rep, check):
    r, d = L.order, L.degree
    need = (r + 1) * (d + 1) + opt.fit_guard
    if u is None:
        seq = solve_homogeneous(L, need + 4)
    elif len(u) < need:
        seq = case.period_sequence(need + 4)
    else:
        seq = u
    try:
        fitted = fit_operator(seq, r, d, opt.fit_guard)
    except AmbiguousFit as exc:
        check("operator-fit", False, str(exc))
        return L
    if fitted is None:
        check("operator-fit", False, f"no operator of order {r} and degree {d} found")
        return L
    rep.fitted_operator = fitted.to_text()
    check("operator-fit", fitted == L.normalized(), "fitted operator equals the expected one" if fitted == L.normalized() else f"fitted {fitted}")
    return fitted


def _local_stage(L, rep, check, digits):
    pts = singular_locus(L)
    rep.singular_points = [{"value": str(p.value) if p.exact else _num(p.value, 30),
                            "modulus": _num(p.modulus, 30)} for p in pts]
    moduli = [p.modulus for p in pts]
    unique_top = len(moduli) == 1 or (len(moduli) > 1 and moduli[-1] - moduli[-2] > mpmath.mpf(2) ** -40)
    rep.normal_conifold = bool(unique_top)
    check("normal-conifold", unique_top, "unique finite singular point of largest modulus")
    at0 = local_exponents(L, 0)
    rep.exponents["0"] = [_exp_text(e) for e in at0.exponents]
    check("mum-at-0", at0.regular and all(AlgebraicNumber.coerce(e) == 0 for e in at0.exponents if isinstance(e, AlgebraicNumber))
          and all(isinstance(e, AlgebraicNumber) for e in at0.exponents), "all exponents at 0 vanish")
    inf = local_exponents(L, "infinity")
    rep.exponents["infinity"] = [_exp_text(e) for e in inf.exponents] if inf.regular else None
    for p in pts:
        if p.exact:
            le = local_exponents(L, p.value)
            rep.exponents[str(p.value)] = [_exp_text(e) for e in le.exponents] if le.regular else None


def _limit_stage(case, L, u, opt, rep, check, digits):
    K = opt.terms - 1
    a = solve_homogeneous(L, K)
    b = solve_inhomogeneous(L, [0, 1], K)
    if u is not None:
        k = min(len(u), len(a))
        check("homogeneous-matches-periods", list(a[:k]) == list(u[:k]))
    rep.b_sequence = [str(x) for x in b[:8]]
    res = apery_limit(a, b, opt.precision)
    rep.limit = {"value": _num(res.value, digits), "error": _err(res.error_estimate),
                 "terms": res.terms_used, "ratio": _err(res.convergence_ratio)}
    expected = evaluate_expression(case.expected_limit, opt.precision)
    diff = abs(res.value - expected)
    check("limit-expected", diff < max(mpmath.mpf(opt.tolerance), 10 * res.error_estimate), f"|alpha - {case.expected_limit}| = {_err(diff)}")
    return a, b, res.value


def _thnf_stage(case, L, alpha, opt, rep, check, digits, tol):
    method = case.thnf_method
    if method in ("quadrature-2d", "quadrature-3d"):
        use = "quadrature-3d" if (method == "quadrature-3d" and opt.full_3d) else None
        vs = [thnf.thnf_coefficient(case.id, k, opt.digits, method=use) for k in range(L.degree)]
        for k, v in enumerate(vs):
            rep.thnf[f"v{k}"] = {"value": _num(v.value, opt.digits), "error": _err(v.error), "method": v.method}
            key = f"v{k}"
            if key in case.expected_values:
                want = evaluate_expression(case.expected_values[key], opt.precision)
                diff = abs(v.value - want)
                check(f"{key}-closed-form", diff <= max(100 * v.error, mpmath.mpf(10) ** (-opt.digits + 5)), f"diff {_err(diff)}")
        err = max(v.error for v in vs)
        scale = sum(abs(Fraction(L.P_eval(i, L.degree - 1 - i))) for i in range(L.degree))
        scale = mpmath.mpf(scale.numerator) / scale.denominator
        kappa_num, rounding = inhomogeneous_constant(L, [v.value for v in vs], uncertainty=max(err * scale, mpmath.mpf(10) ** -opt.digits))
        kappa = AlgebraicNumber(rounding.value)
        rep.kappa = {"numeric": _num(kappa_num, opt.digits), "exact": str(kappa), "certified": rounding.certified,
                     "gap": _err(rounding.gap), "source": "taylor-coefficients"}
        check("kappa-certified", rounding.certified)
        V0, V0_err = vs[0].value, vs[0].error
    else:
        if method == "closed-form-1d":
            res = thnf.thnf_value_at_zero(case.id, opt.digits)
            V0, V0_err = res.value, res.error
        else:
            V0 = thnf.v18_antiderivative_difference(opt.precision)
            V0_err = mpmath.ldexp(1, -opt.precision + 8)
            cross = thnf.v18_contour_integral(opt.digits)
            diff = abs(cross.value - V0)
            check("contour-cross-check", diff < max(100 * cross.error, mpmath.mpf(10) ** (-opt.digits + 5)), f"diff {_err(diff)}")
        rep.thnf["V0"] = {"value": _num(V0, opt.digits), "error": _err(V0_err), "method": method}
        kappa = case.metadata_kappa()
        if kappa is None:
            check("kappa-metadata", False, "no D_N / r_N metadata")
            return
        rep.kappa = {"numeric": _num(AlgebraicNumber.coerce(kappa).to_complex(opt.precision), opt.digits),
                     "exact": str(kappa), "certified": True, "source": "metadata"}
    if "V0" in case.expected_values:
        want = evaluate_expression(case.expected_values["V0"], opt.precision)
        diff = abs(V0 - want)
        check("V0-closed-form", diff <= max(100 * V0_err, tol), f"diff {_err(diff)}")
    if "kappa" in case.expected_values:
        check("kappa-expected", AlgebraicNumber.coerce(kappa) == case.expected_values["kappa"], f"kappa = {kappa}")
    v_hat = normalize_thnf([V0], kappa, L)[0]
    v_hat = mpmath.mpmathify(v_hat)
    if isinstance(v_hat, mpmath.mpc):
        check("v_hat0-real", abs(v_hat.imag) < tol, f"imaginary residue {_err(v_hat.imag)}")
        v_hat = v_hat.real
    rep.v_hat0 = _num(v_hat, opt.digits)
    diff = abs(alpha - v_hat)
    check("central-equality", diff < tol, f"|alpha - V_hat(0)| = {_err(diff)}")


def _recognize_stage(case, a, b, opt, rep, check):
    prec = int(math.ceil(opt.recognition_digits * math.log2(10)))

    def alpha(p):
        return apery_limit(a, b, p).value

    try:
        rec = recognize_constant(alpha, default_basis(), opt.max_height, prec)
    except DomainError as exc:
        check("recognition", False, str(exc))
        return
    if rec is None:
        check("recognition", False, "no relation found")
        return
    if rec.ambiguous:
        rep.recognized = " | ".join(str(c) for c in rec.alternatives)
        check("recognition", False, "ambiguous relations")
        return
    rep.recognized = rec.expression()
    # compare with the expected form numerically: the two may use different basis labels
    vp = 2 * prec
    with mpmath.workprec(vp):
        got = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * BASIS_LABELS[label](vp)
                          for label, c in rec.coefficients.items())
        want = evaluate_expression(case.expected_limit, vp)
        ok = abs(got - want) < mpmath.ldexp(1, -vp + 16)
    check("recognition", ok, f"{rec.expression()} vs expected {case.expected_limit}")


def verify_all(ids=None, options: VerifyOptions | None = None):
    """Reports for the given (default: all registered) cases, ordered by case id."""
    ids = sorted(ids or case_ids())
    return [verify_case(get_case(i), options) for i in ids]
