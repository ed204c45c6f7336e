"""JSON text formats for elements, matrices, modules, ideals and complexes.

``dumps`` is canonical: sorted keys, compact separators, one trailing
newline. Loading a canonical file and dumping it again reproduces it byte
for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .complexes import PerfectComplex, validate_complex
from .errors import ParseError
from .grouprings import Domain, FiniteAbelianGroup, GroupRingElement
from .linalg import GroupRingMatrix
from .modules import ConcreteModule, IdealHandle


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _coeff_out(c, domain: Domain):
    return str(Fraction(c)) if domain.kind == "rat" else int(c)


def element_to_json(x: GroupRingElement) -> dict:
    return {
        "group": list(x.group.invariant_factors),
        "domain": x.domain.tag(),
        "coeffs": [_coeff_out(c, x.domain) for c in x.coeffs],
    }


def matrix_to_json(A: GroupRingMatrix) -> dict:
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [[element_to_json(x) for x in row] for row in A.entries],
    }


def module_to_json(M: ConcreteModule) -> dict:
    out = M.to_dict()
    out["group"] = list(M.group.invariant_factors)
    out["l"] = M.l
    return out


def ideal_to_json(I: IdealHandle) -> dict:
    return {
        "group": list(I.group.invariant_factors),
        "l": I.l,
        "N": I.N,
        "generators": [element_to_json(g) for g in I.generators],
    }


def complex_to_json(C: PerfectComplex) -> dict:
    return {
        "group": list(C.group.invariant_factors),
        "l": C.l,
        "ranks": list(C.ranks),
        "differentials": [matrix_to_json(d) for d in C.differentials],
    }


def to_json(obj) -> dict:
    for kind, fn in (
        (GroupRingElement, element_to_json),
        (GroupRingMatrix, matrix_to_json),
        (ConcreteModule, module_to_json),
        (IdealHandle, ideal_to_json),
        (PerfectComplex, complex_to_json),
    ):
        if isinstance(obj, kind):
            return fn(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(obj) -> str:
    return dumps(to_json(obj))


# parsing


def _need(d, key, where):
    if not isinstance(d, dict):
        raise ParseError("expected an object", where)
    if key not in d:
        raise ParseError(f"missing key {key!r}", where)
    return d[key]


def _int(x, where, minimum=None):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", where)
    if minimum is not None and x < minimum:
        raise ParseError(f"expected an integer >= {minimum}, got {x}", where)
    return x


def _list(x, where):
    if not isinstance(x, list):
        raise ParseError(f"expected a list, got {type(x).__name__}", where)
    return x


def group_from_json(x, where="group") -> FiniteAbelianGroup:
    factors = [_int(d, f"{where}[{i}]") for i, d in enumerate(_list(x, where))]
    try:
        return FiniteAbelianGroup(tuple(factors))
    except ValueError as exc:
        raise ParseError(str(exc), where) from None


def _coeff_in(c, domain: Domain, where):
    if domain.kind == "rat":
        if not isinstance(c, str):
            raise ParseError(f"rational coefficients are strings, got {c!r}", where)
        try:
            return Fraction(c)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational {c!r}", where) from None
    return _int(c, where)


def element_from_json(d, where="element", group=None) -> GroupRingElement:
    G = group_from_json(_need(d, "group", where), f"{where}.group")
    if group is not None and G != group:
        raise ParseError(f"group {G} differs from the enclosing group {group}", f"{where}.group")
    tag = _need(d, "domain", where)
    if not isinstance(tag, str):
        raise ParseError("domain tag must be a string", f"{where}.domain")
    try:
        domain = Domain.from_tag(tag)
    except ParseError:
        raise ParseError(f"unknown scalar domain tag {tag!r}", f"{where}.domain") from None
    coeffs = _list(_need(d, "coeffs", where), f"{where}.coeffs")
    if len(coeffs) != G.order:
        raise ParseError(f"expected {G.order} coefficients, got {len(coeffs)}", f"{where}.coeffs")
    cs = [_coeff_in(c, domain, f"{where}.coeffs[{i}]") for i, c in enumerate(coeffs)]
    x = GroupRingElement(G, domain, tuple(cs))
    if [_coeff_out(c, domain) for c in x.coeffs] != coeffs:
        raise ParseError("coefficients are not in canonical reduced form", f"{where}.coeffs")
    return x


def matrix_from_json(d, where="matrix", group=None) -> GroupRingMatrix:
    rows = _int(_need(d, "rows", where), f"{where}.rows", 0)
    cols = _int(_need(d, "cols", where), f"{where}.cols", 0)
    entries = _list(_need(d, "entries", where), f"{where}.entries")
    if len(entries) != rows:
        raise ParseError(f"expected {rows} rows, got {len(entries)}", f"{where}.entries")
    parsed = []
    for i, row in enumerate(entries):
        row = _list(row, f"{where}.entries[{i}]")
        if len(row) != cols:
            raise ParseError(f"expected {cols} entries, got {len(row)}", f"{where}.entries[{i}]")
        parsed.append([element_from_json(x, f"{where}.entries[{i}][{j}]", group) for j, x in enumerate(row)])
    if group is None:
        if not parsed or not parsed[0]:
            raise ParseError("an empty matrix needs an enclosing group", where)
        group = parsed[0][0].group
    domains = {x.domain for r in parsed for x in r}
    if len(domains) > 1:
        raise ParseError("entries use different scalar domains", f"{where}.entries")
    domain = domains.pop() if domains else Domain("int")
    return GroupRingMatrix(group, domain, parsed, rows, cols)


def module_from_json(d, where="module") -> ConcreteModule:
    G = group_from_json(_need(d, "group", where), f"{where}.group")
    l = _int(_need(d, "l", where), f"{where}.l", 2)
    factors = [_int(e, f"{where}.factors[{i}]", 1) for i, e in enumerate(_list(_need(d, "factors", where), f"{where}.factors"))]
    actions = _list(_need(d, "actions", where), f"{where}.actions")
    try:
        M = ConcreteModule(G, l, tuple(factors), tuple(actions))
        M.check()
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), f"{where}.actions") from None
    if M.to_dict()["actions"] != actions:
        raise ParseError("action entries are not reduced", f"{where}.actions")
    return M


def ideal_from_json(d, where="ideal") -> IdealHandle:
    G = group_from_json(_need(d, "group", where), f"{where}.group")
    l = _int(_need(d, "l", where), f"{where}.l", 2)
    N = _int(_need(d, "N", where), f"{where}.N", 1)
    gens = [
        element_from_json(x, f"{where}.generators[{i}]", G)
        for i, x in enumerate(_list(_need(d, "generators", where), f"{where}.generators"))
    ]
    return IdealHandle(G, l, N, gens)


def complex_from_json(d, where="complex") -> PerfectComplex:
    G = group_from_json(_need(d, "group", where), f"{where}.group")
    l = _int(_need(d, "l", where), f"{where}.l", 2)
    ranks = [_int(r, f"{where}.ranks[{i}]", 0) for i, r in enumerate(_list(_need(d, "ranks", where), f"{where}.ranks"))]
    ds = [
        matrix_from_json(m, f"{where}.differentials[{i}]", G)
        for i, m in enumerate(_list(_need(d, "differentials", where), f"{where}.differentials"))
    ]
    try:
        C = PerfectComplex(G, l, ranks, ds)
    except ValueError as exc:
        raise ParseError(str(exc), f"{where}.differentials") from None
    validate_complex(C, require_finite=False)
    return C


def from_json(d):
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    if "differentials" in d:
        return complex_from_json(d)
    if "factors" in d:
        return module_from_json(d)
    if "generators" in d:
        return ideal_from_json(d)
    if "entries" in d:
        return matrix_from_json(d)
    if "coeffs" in d:
        return element_from_json(d)
    raise ParseError(f"unrecognised artifact with keys {sorted(d)}")


def parse(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_json(d)


def parse_artifacts(path) -> object:
    return parse(Path(path).read_text(encoding="utf-8"))
