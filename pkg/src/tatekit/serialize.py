"""JSON and text forms of series, operators, lattices and lifting specs.

Every ``*_to_json`` output is plain JSON data; the matching ``*_from_json``
raises :class:`SchemaError` carrying a ``$.path`` to the offending field.
"""

from __future__ import annotations

import json
import re
from typing import Optional

from . import lattice
from .basefield import FieldSpec, format_scalar, parse_scalar
from .errors import SchemaError
from .liftings import LiftingSpec
from .operators import CoProj, Compose, FiniteRank, Id, MulBy, Proj, Scale, Sum
from .series import BoundCertificate, TruncatedSeries, exact_certificate, polynomial, series

# ---------------------------------------------------------------- series


def series_to_json(a: TruncatedSeries) -> dict:
    return {
        "field": a.spec.to_json(),
        "n": a.n,
        "terms": [[list(e), format_scalar(c)] for e, c in a.terms],
        "cert": a.cert.to_json(),
    }


def _int(obj, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError("expected an integer", path)
    return obj


def series_from_json(obj, path: str = "$", spec: Optional[FieldSpec] = None) -> TruncatedSeries:
    if not isinstance(obj, dict):
        raise SchemaError("series must be an object", path)
    if "field" in obj:
        spec = FieldSpec.from_json(obj["field"], path + ".field")
    elif spec is None:
        raise SchemaError("missing 'field'", path)
    n = _int(obj.get("n"), path + ".n")
    if n < 0:
        raise SchemaError("arity must be non-negative", path + ".n")
    raw = obj.get("terms", [])
    if not isinstance(raw, list):
        raise SchemaError("'terms' must be a list", path + ".terms")
    coeffs = {}
    for k, t in enumerate(raw):
        p = path + f".terms[{k}]"
        if not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], list):
            raise SchemaError("term must be [exponent list, scalar]", p)
        if len(t[0]) != n:
            raise SchemaError(f"exponent must have {n} entries", p)
        e = tuple(_int(x, p) for x in t[0])
        if e in coeffs:
            raise SchemaError(f"duplicate exponent {list(e)}", p)
        coeffs[e] = parse_scalar(spec, t[1], p + "[1]")
    if "cert" in obj:
        cert = BoundCertificate.from_json(obj["cert"], n, path + ".cert")
    else:
        cert = exact_certificate(n, [e for e, c in coeffs.items() if not c.is_zero()])
    try:
        return series(spec, n, coeffs, cert, strict=True)
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc), path) from None


_VAR = re.compile(r"^t(\d+)(?:\^(-?\d+))?$")


def parse_series(text: str, spec: FieldSpec, n: int) -> TruncatedSeries:
    """Parse the text form printed by ``format_series``, e.g. ``"1 - 2*t1^-1*t2 + O(t1^4)"``.

    Coefficients over a finite extension are written ``[c0,c1,...]``.
    """
    body, hi = text.strip(), [None] * n
    m = re.search(r"\+\s*O\(([^)]*)\)\s*$", body)
    if m:
        body = body[: m.start()].strip()
        for part in m.group(1).split(","):
            v = _VAR.match(part.strip())
            if not v or not v.group(2) or not 1 <= int(v.group(1)) <= n:
                raise SchemaError(f"bad cutoff {part.strip()!r}")
            hi[int(v.group(1)) - 1] = int(v.group(2))
    # Protect signs inside exponents and coefficient lists before splitting on +/-.
    masked = re.sub(r"\^-", "^~", body)
    masked = re.sub(r"\[[^\]]*\]", lambda mm: mm.group(0).replace("-", "~"), masked)
    coeffs: dict = {}
    if masked not in ("", "0"):
        tokens = re.findall(r"[+-]?[^+-]+", masked.replace(" ", ""))
        for tok in tokens:
            sign = -1 if tok.startswith("-") else 1
            tok = tok.lstrip("+-").replace("~", "-")
            c, e = spec.one(), [0] * n
            for factor in tok.split("*"):
                v = _VAR.match(factor)
                if v:
                    i = int(v.group(1))
                    if not 1 <= i <= n:
                        raise SchemaError(f"variable t{i} outside arity {n}")
                    e[i - 1] += int(v.group(2) or 1)
                else:
                    c = c * parse_scalar(spec, factor)
            key = tuple(e)
            val = c if sign > 0 else -c
            coeffs[key] = coeffs[key] + val if key in coeffs else val
    return polynomial(spec, n, coeffs, hi)


# ---------------------------------------------------------------- operators


def operator_to_json(f) -> dict:
    if isinstance(f, Id):
        return {"op": "id"}
    if isinstance(f, Scale):
        return {"op": "scale", "c": format_scalar(f.c)}
    if isinstance(f, MulBy):
        return {"op": "mul", "g": _bare(f.g)}
    if isinstance(f, Proj):
        return {"op": "proj", "axis": f.axis, "c": f.c}
    if isinstance(f, CoProj):
        return {"op": "coproj", "axis": f.axis, "c": f.c}
    if isinstance(f, FiniteRank):
        return {"op": "finite", "phi": [[list(e), format_scalar(c)] for e, c in f.phi], "v": _bare(f.v)}
    if isinstance(f, Sum):
        return {"op": "sum", "terms": [operator_to_json(t) for t in f.terms]}
    if isinstance(f, Compose):
        return {"op": "compose", "factors": [operator_to_json(t) for t in f.factors]}
    raise SchemaError(f"unknown operator node {f!r}")


def _bare(a: TruncatedSeries) -> dict:
    return {"n": a.n, "terms": [[list(e), format_scalar(c)] for e, c in a.terms]}


def operator_from_json(obj, spec: FieldSpec, n: int, path: str = "$"):
    if not isinstance(obj, dict) or "op" not in obj:
        raise SchemaError("operator must be an object with an 'op' field", path)
    op = obj["op"]
    if op == "id":
        return Id()
    if op == "scale":
        return Scale(parse_scalar(spec, obj.get("c"), path + ".c"))
    if op in ("proj", "coproj"):
        axis = _int(obj.get("axis"), path + ".axis")
        if not 1 <= axis <= n:
            raise SchemaError(f"axis {axis} outside 1..{n}", path + ".axis")
        c = _int(obj.get("c", 0), path + ".c")
        return Proj(axis, c) if op == "proj" else CoProj(axis, c)
    if op == "mul":
        g = series_from_json(obj.get("g"), path + ".g", spec)
        _same_arity(g, n, path + ".g")
        return MulBy(g)
    if op == "finite":
        v = series_from_json(obj.get("v"), path + ".v", spec)
        _same_arity(v, n, path + ".v")
        raw = obj.get("phi", [])
        if not isinstance(raw, list):
            raise SchemaError("'phi' must be a list", path + ".phi")
        phi = []
        for k, t in enumerate(raw):
            p = path + f".phi[{k}]"
            if not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], list) or len(t[0]) != n:
                raise SchemaError(f"phi entry must be [exponent of length {n}, scalar]", p)
            phi.append((tuple(_int(x, p) for x in t[0]), parse_scalar(spec, t[1], p + "[1]")))
        return FiniteRank(tuple(phi), v)
    if op in ("sum", "compose"):
        key = "terms" if op == "sum" else "factors"
        raw = obj.get(key)
        if not isinstance(raw, list):
            raise SchemaError(f"'{key}' must be a list", path + "." + key)
        kids = tuple(operator_from_json(t, spec, n, path + f".{key}[{k}]") for k, t in enumerate(raw))
        return Sum(kids) if op == "sum" else Compose(kids)
    raise SchemaError(f"unknown op {op!r}", path + ".op")


def _same_arity(a: TruncatedSeries, n: int, path: str) -> None:
    if a.n != n:
        raise SchemaError(f"arity {a.n} != {n}", path)


def program_to_json(f, spec: FieldSpec, n: int) -> dict:
    """An operator together with the field and arity it acts on."""
    return {"field": spec.to_json(), "n": n, "op": operator_to_json(f)}


def program_from_json(obj, path: str = "$") -> tuple:
    if not isinstance(obj, dict):
        raise SchemaError("operator program must be an object", path)
    spec = FieldSpec.from_json(obj.get("field"), path + ".field")
    n = _int(obj.get("n"), path + ".n")
    return operator_from_json(obj.get("op"), spec, n, path + ".op"), spec, n


# ---------------------------------------------------------------- generic


KINDS = {
    "series": (series_to_json, series_from_json),
    "lattice": (lattice.to_json, lattice.from_json),
    "lifting": (LiftingSpec.to_json, LiftingSpec.from_json),
    "field": (FieldSpec.to_json, FieldSpec.from_json),
}


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no extra whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text: str, path: str = "$"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", path) from None


def serialize(kind: str, value) -> str:
    if kind == "operator":
        return dumps(program_to_json(*value))
    return dumps(KINDS[kind][0](value))


def parse(kind: str, text: str):
    obj = loads(text)
    if kind == "operator":
        return program_from_json(obj)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    return KINDS[kind][1](obj)
