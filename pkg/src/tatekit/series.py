"""Iterated Laurent series k((t1))...((tn)) as finite tables with window certificates.

Exponent vectors are tuples ``(a1, ..., an)``; ``tn`` is the outermost variable,
so lex comparison reads the last coordinate first. A series stores its nonzero
coefficients inside the *known* region of its :class:`BoundCertificate`;
coefficients at or beyond a precision cutoff are unknown, never zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .basefield import FieldScalar, FieldSpec, format_scalar
from .errors import (
    ArityMismatch,
    DivisionByZero,
    EmptyPrecision,
    IndeterminateLeading,
    NonUnitLeading,
    NotIntegral,
    SchemaError,
    SpecMismatch,
    ZeroSeries,
)

Exponent = tuple
Cutoff = Optional[int]  # None means no cutoff on that axis

# Guard against pathological envelope enumeration.
MAX_EXCEPTIONS = 100_000


def lex_key(e: Exponent) -> tuple:
    return tuple(reversed(e))


def lex_compare(a: Exponent, b: Exponent) -> int:
    ka, kb = lex_key(a), lex_key(b)
    return (ka > kb) - (ka < kb)


def vadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _cmin(a: Cutoff, b: Cutoff) -> Cutoff:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class SliceRule:
    """Lower bound for one axis as a function of the next-outer exponent ``x``.

    ``bound(x) = exceptions[x]`` if listed, else ``base + slope * x``.
    """

    base: int
    slope: int = 0
    exceptions: tuple = ()

    def __post_init__(self):
        exc = tuple(sorted((int(x), int(b)) for x, b in dict(self.exceptions).items()))
        object.__setattr__(self, "exceptions", exc)

    @cached_property
    def _table(self) -> dict:
        return dict(self.exceptions)

    def __call__(self, x: int) -> int:
        t = self._table
        return t[x] if x in t else self.base + self.slope * x

    def affine(self, x: int) -> int:
        return self.base + self.slope * x

    @property
    def is_rectangular(self) -> bool:
        return self.slope == 0 and not self.exceptions

    def minorant(self) -> "SliceRule":
        """Pure affine rule below this one everywhere (same slope)."""
        deficit = max([0] + [self.affine(x) - b for x, b in self.exceptions])
        return SliceRule(self.base - deficit, self.slope)

    def minimum(self, lo: Optional[int], hi: Optional[int]) -> Optional[int]:
        """Minimum over ``x`` in ``[lo, hi]`` (``None`` ends are infinite); ``None`` means -inf."""
        vals = [b for x, b in self.exceptions if (lo is None or x >= lo) and (hi is None or x <= hi)]
        if self.slope > 0:
            if lo is None:
                return None
            vals.append(self.affine(lo))
        elif self.slope < 0:
            if hi is None:
                return None
            vals.append(self.affine(hi))
        else:
            vals.append(self.base)
        return min(vals)

    def clamp(self, c: int) -> "SliceRule":
        """Rule ``max(self, c)``; exact only when rectangular, otherwise raises only the base."""
        if self.is_rectangular:
            return SliceRule(max(self.base, c))
        return self


@dataclass(frozen=True)
class BoundCertificate:
    """Certified support and precision of a truncated series.

    * ``lo_top``: every nonzero coefficient has ``a_n >= lo_top``.
    * ``rules[i]`` (``i < n-1``): nonzero coefficients have ``a_i >= rules[i](a_{i+1})``.
    * ``hi[i]``: coefficients with ``a_i >= hi[i]`` are unknown; ``None`` = no cutoff.

    Lower-bound claims are only asserted inside the known region.
    """

    lo_top: int
    rules: tuple
    hi: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "hi", tuple(self.hi))
        n = len(self.hi)
        if len(self.rules) != max(n - 1, 0):
            raise SchemaError(f"certificate for n={n} needs {max(n - 1, 0)} slice rules")
        if n and self.hi[-1] is not None and self.lo_top > self.hi[-1]:
            raise SchemaError(f"axis {n}: lower bound {self.lo_top} exceeds cutoff {self.hi[-1]}")
        for i, r in enumerate(self.rules):
            if r.is_rectangular and self.hi[i] is not None and r.base > self.hi[i]:
                raise SchemaError(f"axis {i + 1}: lower bound {r.base} exceeds cutoff {self.hi[i]}")

    @property
    def n(self) -> int:
        return len(self.hi)

    @classmethod
    def rectangular(cls, lo: Sequence[int], hi: Sequence[Cutoff]) -> "BoundCertificate":
        lo = list(lo)
        n = len(hi)
        if len(lo) != n:
            raise ArityMismatch("lo and hi lengths differ")
        if n == 0:
            return cls(0, (), ())
        return cls(lo[-1], tuple(SliceRule(b) for b in lo[:-1]), tuple(hi))

    @property
    def is_rectangular(self) -> bool:
        return all(r.is_rectangular for r in self.rules)

    def lower(self, i: int, e: Exponent) -> int:
        if i == self.n - 1:
            return self.lo_top
        return self.rules[i](e[i + 1])

    def admits(self, e: Exponent) -> bool:
        return all(e[i] >= self.lower(i, e) for i in range(self.n))

    def known(self, e: Exponent) -> bool:
        return all(h is None or x < h for x, h in zip(e, self.hi))

    def certifies(self, e: Exponent) -> bool:
        return self.known(e) and self.admits(e)

    @cached_property
    def axis_min(self) -> tuple:
        """Per-axis minimum exponent over the admissible known region (``None`` = -inf)."""
        n = self.n
        if n == 0:
            return ()
        out: list = [None] * n
        out[n - 1] = self.lo_top
        for i in range(n - 2, -1, -1):
            lo = out[i + 1]
            hi = None if self.hi[i + 1] is None else self.hi[i + 1] - 1
            out[i] = self.rules[i].minimum(lo, hi)
        return tuple(out)

    def with_hi(self, hi: Sequence[Cutoff]) -> "BoundCertificate":
        return _make_cert(self.lo_top, self.rules, tuple(hi))

    def to_json(self) -> dict:
        lo = [r.base for r in self.rules] + ([self.lo_top] if self.n else [])
        tails = [{"slope": r.slope, "exceptions": [list(x) for x in r.exceptions]} for r in self.rules]
        return {"lo": lo, "hi": list(self.hi), "tails": tails}

    @classmethod
    def from_json(cls, obj, n: int, path: str = "$") -> "BoundCertificate":
        if not isinstance(obj, dict):
            raise SchemaError("certificate must be an object", path)
        lo, hi = obj.get("lo"), obj.get("hi")
        if not isinstance(lo, list) or len(lo) != n or not all(isinstance(v, int) for v in lo):
            raise SchemaError(f"'lo' must list {n} integers", path + ".lo")
        if not isinstance(hi, list) or len(hi) != n or not all(v is None or isinstance(v, int) for v in hi):
            raise SchemaError(f"'hi' must list {n} integers or nulls", path + ".hi")
        for i in range(n):
            if hi[i] is not None and lo[i] > hi[i]:
                raise SchemaError(f"axis {i + 1}: lo {lo[i]} > hi {hi[i]}", path + f".lo[{i}]")
        tails = obj.get("tails", [{} for _ in range(max(n - 1, 0))])
        if not isinstance(tails, list) or len(tails) != max(n - 1, 0):
            raise SchemaError(f"'tails' must list {max(n - 1, 0)} objects", path + ".tails")
        rules = []
        for i, t in enumerate(tails):
            if not isinstance(t, dict):
                raise SchemaError("tail must be an object", path + f".tails[{i}]")
            slope = t.get("slope", 0)
            exc = t.get("exceptions", [])
            if not isinstance(slope, int) or not isinstance(exc, list):
                raise SchemaError("bad tail", path + f".tails[{i}]")
            try:
                rules.append(SliceRule(lo[i], slope, tuple((int(x), int(b)) for x, b in exc)))
            except (TypeError, ValueError):
                raise SchemaError("exceptions must be [x, bound] pairs", path + f".tails[{i}]") from None
        if n == 0:
            return cls(0, (), ())
        return cls(lo[-1], tuple(rules), tuple(hi))


def _make_cert(lo_top: int, rules: Sequence[SliceRule], hi: tuple) -> BoundCertificate:
    """Build a certificate, pulling rectangular lower bounds down to the cutoffs when needed."""
    n = len(hi)
    if n == 0:
        return BoundCertificate(0, (), ())
    if hi[-1] is not None:
        lo_top = min(lo_top, hi[-1])
    fixed = []
    for i, r in enumerate(rules):
        if r.is_rectangular and hi[i] is not None and r.base > hi[i]:
            r = SliceRule(hi[i])
        fixed.append(r)
    return BoundCertificate(lo_top, tuple(fixed), hi)


def exact_certificate(n: int, exps: Iterable[Exponent]) -> BoundCertificate:
    """Tight rectangular certificate with no cutoffs for a finite support."""
    exps = list(exps)
    lo = [min((e[i] for e in exps), default=0) for i in range(n)]
    return BoundCertificate.rectangular(lo, (None,) * n)


@dataclass(frozen=True)
class TruncatedSeries:
    """An element of k((t1))...((tn)) known on a certified window.

    ``terms`` holds the nonzero coefficients sorted lex (outermost variable
    first); use :attr:`coeffs` for a dict view. Build with :func:`series`,
    :func:`monomial`, :func:`polynomial` or :func:`zero`.
    """

    spec: FieldSpec
    n: int
    terms: tuple
    cert: BoundCertificate

    def __post_init__(self):
        if self.cert.n != self.n:
            raise ArityMismatch(f"certificate arity {self.cert.n} != {self.n}")

    @cached_property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def __getitem__(self, e: Exponent) -> FieldScalar:
        return self.coeffs.get(tuple(e), self.spec.zero())

    def coefficient(self, e: Exponent) -> Optional[FieldScalar]:
        """Coefficient at ``e``, or ``None`` if it is not certified."""
        e = tuple(e)
        if not self.cert.known(e):
            return None
        return self.coeffs.get(e, self.spec.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def check(self) -> None:
        """Raise ``AssertionError`` if any stored key violates the certificate."""
        for e, c in self.terms:
            assert len(e) == self.n, e
            assert not c.is_zero(), e
            assert self.cert.certifies(e), (e, self.cert)

    @property
    def support(self) -> list:
        return [e for e, _ in self.terms]

    def __add__(self, other):
        return s_add(self, other)

    def __neg__(self):
        return s_neg(self)

    def __sub__(self, other):
        return s_add(self, s_neg(other))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return s_mul(self, other)
        return s_scale(self, other)

    def __rmul__(self, other):
        return s_scale(self, other)

    def __str__(self) -> str:
        return format_series(self)


def series(spec: FieldSpec, n: int, coeffs: Mapping, cert: BoundCertificate, strict: bool = True) -> TruncatedSeries:
    """Canonical constructor.

    Zero coefficients are dropped. With ``strict`` a key outside the certified
    region raises ``SchemaError``; otherwise such keys are silently discarded.
    """
    if cert.n != n:
        raise ArityMismatch(f"certificate arity {cert.n} != {n}")
    kept = {}
    for e, c in coeffs.items():
        e = tuple(int(x) for x in e)
        if len(e) != n:
            raise ArityMismatch(f"exponent {e} has wrong arity for n={n}")
        if not isinstance(c, FieldScalar):
            c = spec(c)
        elif c.spec != spec:
            raise SpecMismatch(f"{c.spec} vs {spec}")
        if c.is_zero():
            continue
        if not cert.certifies(e):
            if strict:
                raise SchemaError(f"exponent {list(e)} lies outside the certified window")
            continue
        kept[e] = c
    terms = tuple(sorted(kept.items(), key=lambda kv: lex_key(kv[0])))
    return TruncatedSeries(spec, n, terms, cert)


def polynomial(spec: FieldSpec, n: int, coeffs: Mapping, hi: Optional[Sequence[Cutoff]] = None) -> TruncatedSeries:
    """A Laurent polynomial with a tight rectangular certificate.

    With ``hi`` given, terms at or beyond the cutoffs are dropped (treated as unknown).
    """
    nonzero = {tuple(e): c for e, c in coeffs.items() if (spec(c) if not isinstance(c, FieldScalar) else c)}
    cert = exact_certificate(n, nonzero)
    if hi is not None:
        cert = cert.with_hi(tuple(hi))
    return series(spec, n, nonzero, cert, strict=False)


def monomial(spec: FieldSpec, e: Exponent, c=1, hi: Optional[Sequence[Cutoff]] = None) -> TruncatedSeries:
    return polynomial(spec, len(e), {tuple(e): c}, hi)


def zero(spec: FieldSpec, n: int, hi: Optional[Sequence[Cutoff]] = None, lo: Optional[Sequence[int]] = None) -> TruncatedSeries:
    """Zero at any precision; ``lo`` defaults to the cutoffs (or 0 where there is none)."""
    hi = tuple(hi) if hi is not None else (None,) * n
    if lo is None:
        lo = [0 if h is None else h for h in hi]
    return TruncatedSeries(spec, n, (), BoundCertificate.rectangular(lo, hi))


def one(spec: FieldSpec, n: int) -> TruncatedSeries:
    return monomial(spec, (0,) * n)


def _check_pair(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.spec != b.spec:
        raise SpecMismatch(f"{a.spec} vs {b.spec}")
    if a.n != b.n:
        raise ArityMismatch(f"arity {a.n} vs {b.n}")


def _envelope(ra: SliceRule, rb: SliceRule, lo: Optional[int], hi: Optional[int]) -> SliceRule:
    """Exact pointwise ``min(ra, rb)`` on ``[lo, hi]`` as a single rule."""
    if ra.slope == rb.slope:
        base = min(ra.base, rb.base)
        pts = set(dict(ra.exceptions)) | set(dict(rb.exceptions))
        tail = SliceRule(base, ra.slope)
        exc = {}
        for x in pts:
            v = min(ra(x), rb(x))
            if v != tail.affine(x):
                exc[x] = v
        return SliceRule(base, ra.slope, tuple(exc.items()))
    # Pick the line that is eventually lower on the unbounded side.
    if hi is None and lo is None:
        raise EmptyPrecision("lower envelope of differently sloped bounds is not certifiable on an unbounded range")
    if hi is None:
        tail, other = (ra, rb) if ra.slope < rb.slope else (rb, ra)
    elif lo is None:
        tail, other = (ra, rb) if ra.slope > rb.slope else (rb, ra)
    else:
        tail, other = ra, rb
    # Points where tail's affine is not the minimum: finite by construction.
    ds = other.slope - tail.slope
    db = tail.base - other.base
    # other.affine(x) < tail.affine(x)  <=>  ds * x < db
    if ds > 0:
        start, stop = lo, (math.ceil(db / ds) - 1 if hi is None else min(hi, math.ceil(db / ds) - 1))
    else:
        start, stop = (math.floor(db / ds) + 1 if lo is None else max(lo, math.floor(db / ds) + 1)), hi
    pts = set(dict(ra.exceptions)) | set(dict(rb.exceptions))
    if start is not None and stop is not None and stop >= start:
        if stop - start > MAX_EXCEPTIONS:
            raise EmptyPrecision("lower envelope needs too many exceptional slices")
        pts |= set(range(start, stop + 1))
    base = SliceRule(tail.base, tail.slope)
    exc = {}
    for x in pts:
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            continue
        v = min(ra(x), rb(x))
        if v != base.affine(x):
            exc[x] = v
    return SliceRule(tail.base, tail.slope, tuple(exc.items()))


def s_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise sum on the intersection of the known regions."""
    _check_pair(a, b)
    n = a.n
    hi = tuple(_cmin(x, y) for x, y in zip(a.cert.hi, b.cert.hi))
    if n == 0:
        cert = BoundCertificate(0, (), ())
    else:
        lo_top = min(a.cert.lo_top, b.cert.lo_top)
        rules: list = [None] * (n - 1)
        x_lo = lo_top
        for i in range(n - 2, -1, -1):
            x_hi = None if hi[i + 1] is None else hi[i + 1] - 1
            rules[i] = _envelope(a.cert.rules[i], b.cert.rules[i], x_lo, x_hi)
            x_lo = rules[i].minimum(x_lo, x_hi)
        cert = _make_cert(lo_top, rules, hi)
    out = dict(a.coeffs)
    for e, c in b.terms:
        out[e] = out[e] + c if e in out else c
    return series(a.spec, n, {e: c for e, c in out.items() if cert.known(e)}, cert, strict=True)


def s_neg(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(a.spec, a.n, tuple((e, -c) for e, c in a.terms), a.cert)


def s_scale(a: TruncatedSeries, c) -> TruncatedSeries:
    if not isinstance(c, FieldScalar):
        c = a.spec(c)
    return series(a.spec, a.n, {e: v * c for e, v in a.terms}, a.cert)


def s_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return s_add(a, s_neg(b))


def _product_rule(ra: SliceRule, rb: SliceRule, ga: Optional[int], gb: Optional[int]) -> SliceRule:
    """Lower bound for a sum of exponents split as ``x = xa + xb`` with ``xa >= ga``, ``xb >= gb``."""
    ra, rb = ra.minorant(), rb.minorant()
    sa, sb = ra.slope, rb.slope
    base = ra.base + rb.base
    if sa == sb:
        return SliceRule(base, sa)
    if sa > sb:
        if ga is None:
            raise EmptyPrecision("product lower bound not certifiable (unbounded outer exponent)")
        return SliceRule(base + (sa - sb) * ga, sb)
    if gb is None:
        raise EmptyPrecision("product lower bound not certifiable (unbounded outer exponent)")
    return SliceRule(base + (sb - sa) * gb, sa)


def product_certificate(ca: BoundCertificate, cb: BoundCertificate) -> BoundCertificate:
    n = ca.n
    if n == 0:
        return BoundCertificate(0, (), ())
    ga, gb = ca.axis_min, cb.axis_min
    hi = []
    for i in range(n):
        terms = []
        for h, g in ((ca.hi[i], gb[i]), (cb.hi[i], ga[i])):
            if h is None:
                continue
            if g is None:
                raise EmptyPrecision(f"axis {i + 1}: product precision not certifiable")
            terms.append(h + g)
        hi.append(min(terms) if terms else None)
    lo_top = ca.lo_top + cb.lo_top
    rules = [_product_rule(ca.rules[i], cb.rules[i], ga[i + 1], gb[i + 1]) for i in range(n - 1)]
    if hi[-1] is not None and hi[-1] <= lo_top:
        raise EmptyPrecision("no output coefficient is certifiable")
    cert = _make_cert(lo_top, rules, tuple(hi))
    for i in range(n):
        g = cert.axis_min[i]
        if cert.hi[i] is not None and g is not None and cert.hi[i] <= g:
            raise EmptyPrecision(f"axis {i + 1}: no output coefficient is certifiable")
    return cert


def s_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product, certified wherever every contributing pair of coefficients is known."""
    _check_pair(a, b)
    cert = product_certificate(a.cert, b.cert)
    out: dict = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = vadd(ea, eb)
            if not cert.known(e):
                continue
            v = ca * cb
            out[e] = out[e] + v if e in out else v
    return series(a.spec, a.n, out, cert, strict=True)


def truncate(a: TruncatedSeries, hi: Sequence[Cutoff]) -> TruncatedSeries:
    """Forget coefficients at or beyond new (tighter) cutoffs."""
    new_hi = tuple(_cmin(x, y) for x, y in zip(a.cert.hi, hi))
    cert = a.cert.with_hi(new_hi)
    return series(a.spec, a.n, a.coeffs, cert, strict=False)


def agree(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    """Do ``a`` and ``b`` have equal coefficients wherever both are known?"""
    _check_pair(a, b)
    for e in set(a.coeffs) | set(b.coeffs):
        if a.cert.known(e) and b.cert.known(e) and a[e] != b[e]:
            return False
    return True


def lex_valuation(a: TruncatedSeries) -> Exponent:
    """Lex-minimal exponent with a nonzero coefficient (outermost variable first)."""
    if not a.terms:
        raise ZeroSeries("valuation of zero")
    v = a.terms[0][0]
    cert = a.cert
    # A lex-smaller admissible exponent agrees with v above axis k and is smaller
    # on axis k; it can be unknown only through a cutoff on some axis below k.
    for k in range(a.n - 1, 0, -1):
        if v[k] > cert.lower(k, v) and any(h is not None for h in cert.hi[:k]):
            raise IndeterminateLeading(
                f"leading term {list(v)} not certified: row a{k + 1} in [{cert.lower(k, v)}, {v[k]}) has unknown tail"
            )
    return v


def _positive_weights(gens: Sequence[Exponent], n: int) -> list:
    """Positive integer weights ``w`` with ``w . g >= 1`` for every lex-positive ``g``."""
    w = [1] * n
    for k in range(n):
        need = 1
        for g in gens:
            top = max((i for i in range(n) if g[i] != 0), default=-1)
            if top != k:
                continue
            partial = sum(w[i] * g[i] for i in range(k))
            need = max(need, math.ceil((1 - partial) / g[k]))
        w[k] = need
    return w


def s_inv(a: TruncatedSeries, prec: Sequence[int]) -> TruncatedSeries:
    """Inverse ``b`` such that ``a * b`` is certified equal to 1 on the window ``a_i < prec[i]``.

    Factors ``a = c t^v (1 - h)`` with ``h`` lex-positive and sums the geometric
    series of ``h`` over all terms that can reach the window.
    """
    prec = tuple(prec)
    if len(prec) != a.n or any(p is None for p in prec):
        raise ArityMismatch(f"need {a.n} finite precision cutoffs")
    if a.is_zero():
        raise DivisionByZero("inverse of zero series")
    try:
        v = lex_valuation(a)
    except IndeterminateLeading as exc:
        raise NonUnitLeading(str(exc)) from exc
    n, spec = a.n, a.spec
    gmin_a = a.cert.axis_min
    if any(g is None for g in gmin_a):
        raise EmptyPrecision("input lower bound is not certifiable")
    # b must be known on prec - min(a) for the product to be known on prec.
    prec = tuple(p - g for p, g in zip(prec, gmin_a))
    c_inv = a.coeffs[v] ** -1
    h = {vsub(e, v): -(x * c_inv) for e, x in a.terms if e != v}
    target = vadd(prec, v)  # window for u = 1/(1-h)
    w = _positive_weights(list(h), n)
    wmax = sum(wi * (t - 1) for wi, t in zip(w, target))

    def wt(e):
        return sum(wi * x for wi, x in zip(w, e))

    origin = (0,) * n
    u = {origin: spec.one()}
    frontier = {origin: spec.one()}
    support = {origin}
    while frontier:
        nxt: dict = {}
        for e, x in frontier.items():
            for g, y in h.items():
                f = vadd(e, g)
                if wt(f) > wmax:
                    continue
                nxt[f] = nxt[f] + x * y if f in nxt else x * y
        nxt = {e: x for e, x in nxt.items() if not x.is_zero()}
        support |= set(nxt)
        for e, x in nxt.items():
            u[e] = u[e] + x if e in u else x
        frontier = nxt
    # To first order an unknown term d of a (d_i >= hi_i) perturbs b by
    # -d * c^-2 * t^(-2v) * u^2, and u^2 is supported on the monoid spanned by
    # supp(h). Only monoid points that can land in the window matter, so
    # axis i stays certified below hi_i - 2 v_i + (min monoid coordinate).
    hi_b = list(prec)
    if any(hh is not None for hh in a.cert.hi):
        window = []
        for j in range(n):
            window.append(prec[j] + 2 * v[j] - gmin_a[j])
        # Enumerate monoid points in the widened window.
        ww = sum(wi * (t - 1) for wi, t in zip(w, window))
        pts = {origin}
        frontier_pts = {origin}
        while frontier_pts:
            new = set()
            for e in frontier_pts:
                for g in h:
                    f = vadd(e, g)
                    if wt(f) <= ww and f not in pts:
                        new.add(f)
            pts |= new
            frontier_pts = new
        inside = [e for e in pts if all(x < t for x, t in zip(e, window))]
        for i in range(n):
            if a.cert.hi[i] is None:
                continue
            m = min(0, min((e[i] for e in inside), default=0))
            hi_b[i] = min(hi_b[i], a.cert.hi[i] - 2 * v[i] + m)
    coeffs = {}
    for e, x in u.items():
        if x.is_zero():
            continue
        f = vsub(e, v)
        if all(y < hh for y, hh in zip(f, hi_b)):
            coeffs[f] = x * c_inv
    if not coeffs:
        raise EmptyPrecision("requested precision not achievable from the input certificate")
    cert = _fit_certificate(n, coeffs, tuple(hi_b), _slopes_from(h, n))
    return series(spec, n, coeffs, cert, strict=True)


def _slopes_from(h: Mapping, n: int) -> list:
    slopes = []
    for i in range(n - 1):
        ratios = [g[i] / g[i + 1] for g in h if g[i + 1] > 0]
        s = math.floor(min(ratios)) if ratios else 0
        slopes.append(min(s, 0))
    return slopes


def _fit_certificate(n: int, coeffs: Mapping, hi: tuple, slopes: Sequence[int]) -> BoundCertificate:
    """Tightest certificate with the given slopes containing ``coeffs``."""
    if n == 0:
        return BoundCertificate(0, (), ())
    keys = list(coeffs)
    lo_top = min((e[n - 1] for e in keys), default=0)
    rules = []
    for i in range(n - 1):
        s = slopes[i]
        base = min((e[i] - s * e[i + 1] for e in keys), default=0)
        rules.append(SliceRule(base, s))
    return _make_cert(lo_top, rules, hi)


def residue(a: TruncatedSeries) -> TruncatedSeries:
    """The ``a_n = 0`` slice of an integral series, one arity lower."""
    if a.n == 0:
        raise ArityMismatch("residue of an arity-0 series")
    if a.cert.lo_top < 0:
        raise NotIntegral(f"certificate allows a{a.n} >= {a.cert.lo_top}")
    if a.cert.hi[-1] is not None and a.cert.hi[-1] <= 0:
        raise EmptyPrecision("the residue slice is not certified")
    n = a.n - 1
    if n == 0:
        cert = BoundCertificate(0, (), ())
    else:
        top_rule = a.cert.rules[n - 1]
        cert = _make_cert(top_rule(0), a.cert.rules[: n - 1], a.cert.hi[:n])
    coeffs = {e[:-1]: c for e, c in a.terms if e[-1] == 0}
    return series(a.spec, n, coeffs, cert, strict=True)


def lift_std(a: TruncatedSeries) -> TruncatedSeries:
    """Embed as a series constant in the new outermost variable."""
    n = a.n + 1
    if a.n == 0:
        cert = BoundCertificate(0, (), (None,))
    else:
        cert = BoundCertificate(0, a.cert.rules + (SliceRule(a.cert.lo_top),), a.cert.hi + (None,))
    return series(a.spec, n, {e + (0,): c for e, c in a.terms}, cert, strict=True)


def format_monomial(e: Exponent, var: str = "t") -> str:
    parts = []
    for i, x in enumerate(e):
        if x == 0:
            continue
        parts.append(f"{var}{i + 1}" if x == 1 else f"{var}{i + 1}^{x}")
    return "*".join(parts) if parts else "1"


def format_series(a: TruncatedSeries, var: str = "t") -> str:
    """Render ``sum c * t1^a1 ... tn^an`` in lex order, with an O(...) term for cutoffs."""
    chunks = []
    for e, c in a.terms:
        mono = format_monomial(e, var)
        cs = format_scalar(c)
        if mono == "1":
            chunks.append(cs)
        elif cs == "1":
            chunks.append(mono)
        elif cs == "-1":
            chunks.append("-" + mono)
        else:
            chunks.append(f"{cs}*{mono}")
    body = " + ".join(chunks) if chunks else "0"
    body = body.replace("+ -", "- ")
    cut = [f"{var}{i + 1}^{h}" for i, h in enumerate(a.cert.hi) if h is not None]
    if cut:
        body += " + O(" + ", ".join(cut) + ")"
    return body
