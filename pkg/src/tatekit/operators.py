"""Finitely presented operators on V(n) and the two ideal classifiers.

An operator is an expression tree over multiplication by a Laurent polynomial,
axis projections, finite-rank maps, scalars, sums and compositions. Three
independent views of the same tree are provided:

* :func:`apply` evaluates it on a certified :class:`TruncatedSeries`;
* :func:`normal_form` rewrites it exactly as ``sum_s t^s * (piecewise-constant mask)``
  plus finite-rank terms, from which :func:`transfer` and :func:`classify_tate` read
  off image bounds and kernel cutoffs;
* :func:`classify_yekutieli` only probes the operator on monomials inside a
  radius and searches for standard-lattice refinements, recursing on row blocks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .basefield import FieldScalar, FieldSpec
from .errors import ArityMismatch, EmptyPrecision, SchemaError
from .series import (
    TruncatedSeries,
    _make_cert,
    polynomial,
    s_add,
    s_mul,
    s_scale,
    series,
    vadd,
)

IN = "IN"
OUT = "OUT"
UNKNOWN = "UNKNOWN"

# --- expression tree -----------------------------------------------------------


@dataclass(frozen=True)
class Id:
    pass


@dataclass(frozen=True)
class Scale:
    c: FieldScalar


@dataclass(frozen=True)
class MulBy:
    """Multiplication by an exact Laurent polynomial."""

    g: TruncatedSeries

    def __post_init__(self):
        if any(h is not None for h in self.g.cert.hi):
            raise SchemaError("multiplier must be an exact Laurent polynomial (no precision cutoffs)")
        if not self.g.cert.is_rectangular:
            raise SchemaError("multiplier must carry a rectangular certificate")


@dataclass(frozen=True)
class Proj:
    """Keep monomials with ``a_axis >= c`` (axes are 1-based)."""

    axis: int
    c: int = 0


@dataclass(frozen=True)
class CoProj:
    """Keep monomials with ``a_axis < c``; equals ``Id - Proj(axis, c)``."""

    axis: int
    c: int = 0


@dataclass(frozen=True)
class FiniteRank:
    """``x -> (sum_e phi[e] * x_e) * v`` with ``phi`` a finite tuple of ``(exponent, scalar)``."""

    phi: tuple
    v: TruncatedSeries

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple((tuple(e), c) for e, c in self.phi))
        if any(h is not None for h in self.v.cert.hi):
            raise SchemaError("finite-rank vector must be an exact Laurent polynomial")


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Compose:
    """``factors[0] o factors[1] o ...``: the rightmost factor is applied first."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


Operator = object  # any of the node classes above


def axes_used(f) -> set:
    if isinstance(f, (Proj, CoProj)):
        return {f.axis}
    if isinstance(f, Sum):
        return set().union(*(axes_used(t) for t in f.terms)) if f.terms else set()
    if isinstance(f, Compose):
        return set().union(*(axes_used(t) for t in f.factors)) if f.factors else set()
    return set()


def check_arity(f, n: int) -> None:
    if isinstance(f, (Proj, CoProj)) and not 1 <= f.axis <= n:
        raise ArityMismatch(f"axis {f.axis} outside 1..{n}")
    if isinstance(f, MulBy) and f.g.n != n:
        raise ArityMismatch(f"multiplier arity {f.g.n} != {n}")
    if isinstance(f, FiniteRank):
        if f.v.n != n or any(len(e) != n for e, _ in f.phi):
            raise ArityMismatch(f"finite-rank data has wrong arity for n={n}")
    for child in getattr(f, "terms", ()) + getattr(f, "factors", ()):
        check_arity(child, n)


def format_operator(f) -> str:
    if isinstance(f, Id):
        return "Id"
    if isinstance(f, Scale):
        return f"Scale({f.c})"
    if isinstance(f, MulBy):
        return f"MulBy({f.g})"
    if isinstance(f, Proj):
        return f"Proj({f.axis},{f.c})"
    if isinstance(f, CoProj):
        return f"CoProj({f.axis},{f.c})"
    if isinstance(f, FiniteRank):
        phi = " + ".join(f"{c}*x{list(e)}" for e, c in f.phi) or "0"
        return f"FiniteRank({phi} -> {f.v})"
    if isinstance(f, Sum):
        return "(" + " + ".join(format_operator(t) for t in f.terms) + ")"
    if isinstance(f, Compose):
        return " o ".join(format_operator(t) for t in f.factors)
    raise SchemaError(f"unknown operator node {f!r}")


# --- operational semantics on certified series --------------------------------


def _restrict(x: TruncatedSeries, axis: int, c: int, keep_upper: bool) -> TruncatedSeries:
    i = axis - 1
    cert = x.cert
    if keep_upper:
        coeffs = {e: v for e, v in x.terms if e[i] >= c}
        if i == x.n - 1:
            lo_top = cert.lo_top if cert.hi[i] is not None and c > cert.hi[i] else max(cert.lo_top, c)
            cert = _make_cert(lo_top, cert.rules, cert.hi)
        else:
            rules = list(cert.rules)
            rules[i] = rules[i].clamp(c)
            cert = _make_cert(cert.lo_top, rules, cert.hi)
    else:
        coeffs = {e: v for e, v in x.terms if e[i] < c}
        # Everything with a_i >= c is now known to vanish.
        if cert.hi[i] is not None and c <= cert.hi[i]:
            hi = list(cert.hi)
            hi[i] = None
            cert = _make_cert(cert.lo_top, cert.rules, tuple(hi))
    return series(x.spec, x.n, coeffs, cert, strict=True)


def apply(f, x: TruncatedSeries) -> TruncatedSeries:
    """Evaluate ``f`` on ``x``; the result certificate tracks what is still known."""
    if isinstance(f, Id):
        return x
    if isinstance(f, Scale):
        return s_scale(x, f.c)
    if isinstance(f, MulBy):
        return s_mul(f.g, x)
    if isinstance(f, Proj):
        _axis_ok(f.axis, x.n)
        return _restrict(x, f.axis, f.c, True)
    if isinstance(f, CoProj):
        _axis_ok(f.axis, x.n)
        return _restrict(x, f.axis, f.c, False)
    if isinstance(f, FiniteRank):
        total = x.spec.zero()
        for e, c in f.phi:
            v = x.coefficient(e)
            if v is None:
                raise EmptyPrecision(f"finite-rank functional reads unknown coefficient at {list(e)}")
            total = total + c * v
        return s_scale(f.v, total)
    if isinstance(f, Sum):
        if not f.terms:
            return series(x.spec, x.n, {}, x.cert)
        out = apply(f.terms[0], x)
        for t in f.terms[1:]:
            out = s_add(out, apply(t, x))
        return out
    if isinstance(f, Compose):
        for g in reversed(f.factors):
            x = apply(g, x)
        return x
    raise SchemaError(f"unknown operator node {f!r}")


def _axis_ok(axis: int, n: int) -> None:
    if not 1 <= axis <= n:
        raise ArityMismatch(f"axis {axis} outside 1..{n}")


def evaluate(f, x: dict, spec: FieldSpec) -> dict:
    """Evaluate on an exact finitely supported coefficient dict (no certificates)."""
    if isinstance(f, Id):
        return dict(x)
    if isinstance(f, Scale):
        return _clean({e: c * f.c for e, c in x.items()})
    if isinstance(f, MulBy):
        out: dict = {}
        for eg, cg in f.g.terms:
            for e, c in x.items():
                k = vadd(eg, e)
                out[k] = out[k] + cg * c if k in out else cg * c
        return _clean(out)
    if isinstance(f, Proj):
        return {e: c for e, c in x.items() if e[f.axis - 1] >= f.c}
    if isinstance(f, CoProj):
        return {e: c for e, c in x.items() if e[f.axis - 1] < f.c}
    if isinstance(f, FiniteRank):
        total = spec.zero()
        for e, c in f.phi:
            if e in x:
                total = total + c * x[e]
        return _clean({e: c * total for e, c in f.v.terms})
    if isinstance(f, Sum):
        out = {}
        for t in f.terms:
            for e, c in evaluate(t, x, spec).items():
                out[e] = out[e] + c if e in out else c
        return _clean(out)
    if isinstance(f, Compose):
        for g in reversed(f.factors):
            x = evaluate(g, x, spec)
        return x
    raise SchemaError(f"unknown operator node {f!r}")


def _clean(d: dict) -> dict:
    return {e: c for e, c in d.items() if not c.is_zero()}


# --- exact normal form ---------------------------------------------------------

Interval = tuple  # (lo, hi) with None for an infinite end; lo <= a < hi


def _meet_iv(a: Interval, b: Interval) -> Optional[Interval]:
    lo = a[0] if b[0] is None else b[0] if a[0] is None else max(a[0], b[0])
    hi = a[1] if b[1] is None else b[1] if a[1] is None else min(a[1], b[1])
    if lo is not None and hi is not None and lo >= hi:
        return None
    return (lo, hi)


def _meet_box(a: tuple, b: tuple) -> Optional[tuple]:
    out = []
    for x, y in zip(a, b):
        m = _meet_iv(x, y)
        if m is None:
            return None
        out.append(m)
    return tuple(out)


def _shift_box(box: tuple, r: tuple) -> tuple:
    """Box of inputs ``a`` with ``a + r`` in ``box``."""
    return tuple((None if lo is None else lo - d, None if hi is None else hi - d) for (lo, hi), d in zip(box, r))


def _in_box(e: tuple, box: tuple) -> bool:
    return all((lo is None or x >= lo) and (hi is None or x < hi) for x, (lo, hi) in zip(e, box))


@dataclass
class NormalForm:
    """``x -> sum_s t^s * (mask_s . x) + sum phi_k(x) v_k``.

    ``shifts[s]`` is a list of ``(box, coefficient)``; the mask value at an input
    exponent is the sum of the coefficients of the boxes containing it.
    """

    n: int
    spec: FieldSpec
    shifts: dict = field(default_factory=dict)
    finite: list = field(default_factory=list)  # [(phi dict, v dict)]

    def add_term(self, s: tuple, box: tuple, c: FieldScalar) -> None:
        if not c.is_zero():
            self.shifts.setdefault(s, []).append((box, c))

    def mask(self, s: tuple, e: tuple) -> FieldScalar:
        total = self.spec.zero()
        for box, c in self.shifts.get(s, []):
            if _in_box(e, box):
                total = total + c
        return total

    def evaluate(self, x: dict) -> dict:
        out: dict = {}
        for s, terms in self.shifts.items():
            for e, c in x.items():
                m = self.mask(s, e)
                if m.is_zero():
                    continue
                k = vadd(e, s)
                out[k] = out[k] + m * c if k in out else m * c
        for phi, v in self.finite:
            total = self.spec.zero()
            for e, c in phi.items():
                if e in x:
                    total = total + c * x[e]
            if total.is_zero():
                continue
            for e, c in v.items():
                out[e] = out[e] + total * c if e in out else total * c
        return _clean(out)

    def cells(self, s: tuple) -> list:
        """Canonical refinement: nonzero ``(cell box, value)`` on the product grid of breakpoints."""
        terms = self.shifts.get(s, [])
        if not terms:
            return []
        grids = []
        for i in range(self.n):
            pts = sorted({p for box, _ in terms for p in box[i] if p is not None})
            ivs = []
            prev = None
            for p in pts:
                ivs.append((prev, p))
                prev = p
            ivs.append((prev, None))
            grids.append(ivs)
        out = []
        for cell in itertools.product(*grids):
            probe = tuple(lo if lo is not None else (hi - 1 if hi is not None else 0) for lo, hi in cell)
            v = self.mask(s, probe)
            if not v.is_zero():
                out.append((cell, v))
        return out

    def nonzero_cells(self) -> list:
        return [(s, cell, v) for s in sorted(self.shifts) for cell, v in self.cells(s)]

    def live_finite(self) -> list:
        return [(phi, v) for phi, v in self.finite if phi and v]


def _full_box(n: int) -> tuple:
    return ((None, None),) * n


def _axis_box(n: int, axis: int, lo, hi) -> tuple:
    box = [(None, None)] * n
    box[axis - 1] = (lo, hi)
    return tuple(box)


def normal_form(f, n: int, spec: FieldSpec) -> NormalForm:
    nf = NormalForm(n, spec)
    zero = (0,) * n
    if isinstance(f, Id):
        nf.add_term(zero, _full_box(n), spec.one())
    elif isinstance(f, Scale):
        nf.add_term(zero, _full_box(n), f.c)
    elif isinstance(f, MulBy):
        for e, c in f.g.terms:
            nf.add_term(e, _full_box(n), c)
    elif isinstance(f, Proj):
        _axis_ok(f.axis, n)
        nf.add_term(zero, _axis_box(n, f.axis, f.c, None), spec.one())
    elif isinstance(f, CoProj):
        _axis_ok(f.axis, n)
        nf.add_term(zero, _axis_box(n, f.axis, None, f.c), spec.one())
    elif isinstance(f, FiniteRank):
        phi = _clean(dict(_sum_pairs(f.phi, spec)))
        nf.finite.append((phi, dict(f.v.terms)))
    elif isinstance(f, Sum):
        for t in f.terms:
            g = normal_form(t, n, spec)
            for s, terms in g.shifts.items():
                for box, c in terms:
                    nf.add_term(s, box, c)
            nf.finite.extend(g.finite)
    elif isinstance(f, Compose):
        if not f.factors:
            return normal_form(Id(), n, spec)
        nf = normal_form(f.factors[-1], n, spec)
        for g in reversed(f.factors[:-1]):
            nf = _compose(normal_form(g, n, spec), nf)
    else:
        raise SchemaError(f"unknown operator node {f!r}")
    return nf


def _sum_pairs(pairs, spec) -> dict:
    out: dict = {}
    for e, c in pairs:
        out[e] = out[e] + c if e in out else c
    return out


def _compose(a: NormalForm, b: NormalForm) -> NormalForm:
    """Normal form of ``a o b``."""
    n, spec = a.n, a.spec
    out = NormalForm(n, spec)
    for s, sa in a.shifts.items():
        for r, sb in b.shifts.items():
            for box_a, ca in sa:
                moved = _shift_box(box_a, r)
                for box_b, cb in sb:
                    box = _meet_box(moved, box_b)
                    if box is not None:
                        out.add_term(vadd(s, r), box, ca * cb)
    shift_only = NormalForm(n, spec, a.shifts, [])
    for phi, v in b.finite:
        out.finite.append((phi, shift_only.evaluate(v)))
    for phi_a, v_a in a.finite:
        # phi_a(b x) as a functional of x.
        phi: dict = {}
        for e, c in phi_a.items():
            for r, terms in b.shifts.items():
                src = tuple(x - d for x, d in zip(e, r))
                m = b.mask(r, src)
                if not m.is_zero():
                    phi[src] = phi[src] + c * m if src in phi else c * m
        for phi_b, v_b in b.finite:
            w = spec.zero()
            for e, c in phi_a.items():
                if e in v_b:
                    w = w + c * v_b[e]
            if w.is_zero():
                continue
            for e, c in phi_b.items():
                phi[e] = phi[e] + w * c if e in phi else w * c
        out.finite.append((_clean(phi), dict(v_a)))
    return out


# --- transfer ----------------------------------------------------------------


@dataclass(frozen=True)
class AxisTransfer:
    """Output bounds on one axis for inputs supported in ``[-e, j)`` on that axis.

    Output exponents satisfy ``a >= min(lower, shift_lo - e)`` and
    ``a < max(upper, shift_hi + j)``; a ``None`` part is absent (both ``None`` on
    the lower side means the image is zero). ``kernel`` is a cutoff ``K`` such
    that every input supported in ``a >= K`` is annihilated, or ``None``.
    """

    lower: Optional[int]
    shift_lo: Optional[int]
    upper: Optional[int]
    shift_hi: Optional[int]
    kernel: Optional[int]

    @property
    def bounded_below(self) -> bool:
        return self.shift_lo is None

    def lower_bound(self, e: Optional[int]) -> Optional[int]:
        """Bound for input lower bound ``-e`` (``e=None`` means unbounded input); ``None`` = -inf."""
        parts = [] if self.lower is None else [self.lower]
        if self.shift_lo is not None:
            if e is None:
                return None
            parts.append(self.shift_lo - e)
        return min(parts) if parts else None

    def upper_bound(self, j: Optional[int]) -> Optional[int]:
        parts = [] if self.upper is None else [self.upper]
        if self.shift_hi is not None:
            if j is None:
                return None
            parts.append(self.shift_hi + j)
        return max(parts) if parts else None

    def describe(self, i: int) -> str:
        lo = []
        if self.lower is not None:
            lo.append(str(self.lower))
        if self.shift_lo is not None:
            lo.append(f"-e{i}{self.shift_lo:+d}")
        hi = []
        if self.upper is not None:
            hi.append(str(self.upper))
        if self.shift_hi is not None:
            hi.append(f"j{i}{self.shift_hi:+d}")
        lo_s = "EMPTY" if not lo else (lo[0] if len(lo) == 1 else f"min({', '.join(lo)})")
        if self.shift_lo is not None:
            lo_s += " (UNBOUNDED as e->inf)"
        hi_s = "EMPTY" if not hi else (hi[0] if len(hi) == 1 else f"max({', '.join(hi)})")
        ker = "NONE" if self.kernel is None else f"a{i} >= {self.kernel}"
        return f"axis {i}: out >= {lo_s}; out < {hi_s}; kernel {ker}"


@dataclass(frozen=True)
class WindowTransfer:
    axes: tuple

    def describe(self) -> str:
        return "\n".join(t.describe(i + 1) for i, t in enumerate(self.axes))

    def predicts(self, x_lo: Sequence[Optional[int]], x_hi: Sequence[Optional[int]], e: tuple) -> bool:
        """Is output exponent ``e`` inside the window predicted for inputs in ``[x_lo, x_hi)``?"""
        for i, t in enumerate(self.axes):
            lo = t.lower_bound(None if x_lo[i] is None else -x_lo[i])
            hi = t.upper_bound(x_hi[i])
            if lo is not None and e[i] < lo:
                return False
            if hi is not None and e[i] >= hi:
                return False
            if lo is None and t.lower is None and t.shift_lo is None:
                return False
        return True


def _opt_min(vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def _opt_max(vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def transfer_of(nf: NormalForm) -> WindowTransfer:
    cells = nf.nonzero_cells()
    fin = nf.live_finite()
    axes = []
    for i in range(nf.n):
        lower = _opt_min([s[i] + c[i][0] for s, c, _ in cells if c[i][0] is not None] + [e[i] for _, v in fin for e in v])
        shift_lo = _opt_min([s[i] for s, c, _ in cells if c[i][0] is None])
        upper = _opt_max([s[i] + c[i][1] for s, c, _ in cells if c[i][1] is not None] + [e[i] + 1 for _, v in fin for e in v])
        shift_hi = _opt_max([s[i] for s, c, _ in cells if c[i][1] is None])
        if any(c[i][1] is None for _, c, _ in cells):
            kernel = None
        else:
            kernel = _opt_max([c[i][1] for _, c, _ in cells] + [e[i] + 1 for phi, _ in fin for e in phi])
            if kernel is None:
                kernel = 0  # zero operator: any cutoff works
        axes.append(AxisTransfer(lower, shift_lo, upper, shift_hi, kernel))
    return WindowTransfer(tuple(axes))


def transfer(f, n: int, spec: FieldSpec) -> WindowTransfer:
    return transfer_of(normal_form(f, n, spec))


# --- ideal flags -----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Monomial family ``t^(base + direction * E * unit_axis)`` for ``E = 0, 1, 2, ...``.

    Each member lies in one nonzero cell of the operator, so its image contains
    ``t^(member + shift)``. A plus-failure family walks to ``a_axis -> -inf``
    (unbounded image); a minus-failure family walks to ``+inf`` (no kernel cutoff).
    """

    axis: int
    base: tuple
    direction: int
    shift: tuple

    def at(self, E: int) -> tuple:
        e = list(self.base)
        e[self.axis - 1] += self.direction * E
        return tuple(e)

    def image(self, E: int) -> tuple:
        return vadd(self.at(E), self.shift)

    def __str__(self) -> str:
        sign = "-" if self.direction < 0 else "+"
        return f"t^{list(self.base)} with a{self.axis} {sign}= E"


@dataclass(frozen=True)
class AxisFlags:
    plus: str
    minus: str
    plus_evidence: str = ""
    minus_evidence: str = ""
    plus_witness: Optional[Witness] = None
    minus_witness: Optional[Witness] = None


@dataclass(frozen=True)
class IdealFlags:
    axes: tuple

    def plus(self, i: int) -> str:
        return self.axes[i - 1].plus

    def minus(self, i: int) -> str:
        return self.axes[i - 1].minus

    def verdicts(self) -> list:
        return [(i + 1, sign, getattr(a, sign)) for i, a in enumerate(self.axes) for sign in ("plus", "minus")]

    def describe(self) -> str:
        lines = []
        for i, a in enumerate(self.axes, start=1):
            lines.append(f"axis {i} plus: {a.plus}  {a.plus_evidence}".rstrip())
            lines.append(f"axis {i} minus: {a.minus}  {a.minus_evidence}".rstrip())
        return "\n".join(lines)


def _cell_point(cell: tuple, axis: int, direction: int) -> tuple:
    """A point of ``cell``; on ``axis`` it sits at the bounded end opposite ``direction``."""
    pt = []
    for i, (lo, hi) in enumerate(cell):
        if i == axis - 1:
            end = (None if hi is None else hi - 1) if direction < 0 else lo
            pt.append(0 if end is None else end)
        else:
            pt.append(lo if lo is not None else (hi - 1 if hi is not None else 0))
    return tuple(pt)


def classify_tate(f, n: int, spec: FieldSpec) -> IdealFlags:
    """Decide membership in the ideals I_i^+ (image bounded below on axis i) and
    I_i^- (kills every input with large a_i) from the exact normal form."""
    nf = normal_form(f, n, spec)
    t = transfer_of(nf)
    cells = nf.nonzero_cells()
    axes = []
    for i in range(1, n + 1):
        at = t.axes[i - 1]
        if at.bounded_below:
            plus, pev, pw = IN, f"image in a{i} >= {at.lower if at.lower is not None else 'any'}", None
        else:
            s, cell, _ = next((s, c, v) for s, c, v in cells if c[i - 1][0] is None)
            pw = Witness(i, _cell_point(cell, i, -1), -1, s)
            plus, pev = OUT, f"unbounded image: {pw} maps onto t^{list(pw.image(0))} with a{i} -= E"
        if at.kernel is not None:
            minus, mev, mw = IN, f"kills a{i} >= {at.kernel}", None
        else:
            s, cell, _ = next((s, c, v) for s, c, v in cells if c[i - 1][1] is None)
            mw = Witness(i, _cell_point(cell, i, +1), +1, s)
            minus, mev = OUT, f"no kernel cutoff: {mw} is never annihilated"
        axes.append(AxisFlags(plus, minus, pev, mev, pw, mw))
    return IdealFlags(tuple(axes))


def falsify_witness(f, spec: FieldSpec, w: Witness, window: int = 12) -> bool:
    """Confirm a witness family by direct application for ``E = 0..window``.

    Each member must map onto a nonzero image containing its predicted monomial,
    which drifts by ``E`` along the axis: the image is unbounded (plus family) or
    the inputs escape every kernel cutoff (minus family).
    """
    for E in range(window + 1):
        out = evaluate(f, {w.at(E): spec.one()}, spec)
        if w.image(E) not in out:
            return False
    return True


# --- Yekutieli route ---------------------------------------------------------------


def probe_table(f, n: int, spec: FieldSpec, radius: int = 8) -> dict:
    """Images of every monomial with exponents in ``[-radius, radius]^n``."""
    rng = range(-radius, radius + 1)
    one = spec.one()
    return {e: evaluate(f, {e: one}, spec) for e in itertools.product(rng, repeat=n)}


def _top_axis_verdicts(table: dict, radius: int) -> tuple:
    """Refinement search against standard lattices along the last coordinate."""
    half = radius // 2
    g = {}
    for q in range(-radius, radius + 1):
        g[q] = min((e[-1] for inp, out in table.items() if inp[-1] == q for e in out), default=None)
    inf = float("inf")
    # c(i): lowest row reached by the image of t^i O (restricted to the probe box).
    c = {}
    running = inf
    for q in range(radius, -radius - 1, -1):
        if g[q] is not None:
            running = min(running, g[q])
        c[q] = running
    probe = [c[q] for q in range(-radius, -half + 1)]
    if all(v == probe[0] for v in probe):
        bound = "zero image" if probe[0] == inf else f"f(V) in t^{int(probe[0])} O"
        plus = (IN, f"refinement: {bound}")
    elif all(a < b for a, b in zip(probe, probe[1:])):
        plus = (OUT, f"image of t^i O reaches row {int(probe[0])} at i={-radius}, decreasing")
    else:
        plus = (UNKNOWN, "no refinement decided within radius")
    rows = [any(out for inp, out in table.items() if inp[-1] == q) for q in range(half, radius + 1)]
    if not any(rows):
        minus = (IN, f"refinement: f(t^{half} O) = 0")
    elif all(rows):
        minus = (OUT, f"nonzero on every row {half}..{radius}")
    else:
        minus = (UNKNOWN, "kernel not decided within radius")
    return plus, minus


def _blocks(table: dict) -> dict:
    """Split by (input row, output row) into tables one arity lower."""
    out: dict = {}
    for inp, img in table.items():
        q = inp[-1]
        for e, c in img.items():
            out.setdefault((q, e[-1]), {}).setdefault(inp[:-1], {})[e[:-1]] = c
    # Inputs of a block that map to nothing in that output row still belong to it.
    inputs = {}
    for inp in table:
        inputs.setdefault(inp[-1], []).append(inp[:-1])
    for (q, r), blk in out.items():
        for inp in inputs[q]:
            blk.setdefault(inp, {})
    return out


def _combine_verdicts(vs: list) -> tuple:
    if not vs:
        return IN, "no blocks"
    if any(v == OUT for v, _ in vs):
        return OUT, next(ev for v, ev in vs if v == OUT)
    if all(v == IN for v, _ in vs):
        return IN, f"all {len(vs)} row blocks refine"
    return UNKNOWN, "some row block undecided"


def _yek_axis(table: dict, m: int, axis: int, radius: int) -> tuple:
    if axis == m:
        return _top_axis_verdicts(table, radius)
    pluses, minuses = [], []
    for (q, r), blk in sorted(_blocks(table).items()):
        p, mi = _yek_axis(blk, m - 1, axis, radius)
        pluses.append((p[0], f"block {q}->{r}: {p[1]}"))
        minuses.append((mi[0], f"block {q}->{r}: {mi[1]}"))
    return _combine_verdicts(pluses), _combine_verdicts(minuses)


def classify_yekutieli(f, n: int, spec: FieldSpec, radius: int = 8, table: Optional[dict] = None) -> IdealFlags:
    """Refinement search over standard lattices within ``radius``; UNKNOWN where undecided."""
    if table is None:
        table = probe_table(f, n, spec, radius)
    axes = []
    for i in range(1, n + 1):
        (p, pev), (mi, mev) = _yek_axis(table, n, i, radius)
        axes.append(AxisFlags(p, mi, pev, mev))
    return IdealFlags(tuple(axes))


def compare_routes(tate: IdealFlags, yek: IdealFlags) -> dict:
    """Counts of agreements, contradictions and UNKNOWN verdicts across axes and signs."""
    out = {"agree": 0, "contradict": 0, "unknown": 0, "details": []}
    for (i, sign, a), (_, _, b) in zip(tate.verdicts(), yek.verdicts()):
        if b == UNKNOWN:
            out["unknown"] += 1
        elif a == b:
            out["agree"] += 1
        else:
            out["contradict"] += 1
            out["details"].append(f"axis {i} {sign}: tate {a}, yekutieli {b}")
    return out


# --- cubical structure -----------------------------------------------------------


def decompose(f, axis: int) -> tuple:
    """``(P_i^+ o f, P_i^- o f)``, which sum to ``f``."""
    if isinstance(f, Id):
        return Proj(axis, 0), CoProj(axis, 0)
    return Compose((Proj(axis, 0), f)), Compose((CoProj(axis, 0), f))


def random_series(rng: random.Random, spec: FieldSpec, n: int, lo: int = -3, hi: int = 3, terms: int = 5, truncate: bool = True) -> TruncatedSeries:
    coeffs = {}
    for _ in range(rng.randint(0, terms)):
        coeffs[tuple(rng.randint(lo, hi) for _ in range(n))] = spec.random(rng, nonzero=True, height=4)
    cut = None
    if truncate and rng.random() < 0.5:
        cut = tuple(rng.choice([None, rng.randint(lo + 2, hi + 2)]) for _ in range(n))
    return polynomial(spec, n, coeffs, cut)


def random_operator(rng: random.Random, spec: FieldSpec, n: int, depth: int = 2) -> object:
    """Random expression tree with small constants; sometimes builds ``g - g``."""
    def leaf():
        k = rng.random()
        if k < 0.15:
            return Id()
        if k < 0.4:
            return Proj(rng.randint(1, n), rng.randint(-2, 2))
        if k < 0.6:
            return CoProj(rng.randint(1, n), rng.randint(-2, 2))
        if k < 0.85:
            g = random_series(rng, spec, n, -2, 2, terms=2, truncate=False)
            if g.is_zero():
                g = polynomial(spec, n, {tuple(rng.randint(-2, 2) for _ in range(n)): 1})
            return MulBy(g)
        if k < 0.93:
            phi = tuple((tuple(rng.randint(-2, 2) for _ in range(n)), spec.random(rng, nonzero=True, height=3)) for _ in range(rng.randint(1, 2)))
            v = random_series(rng, spec, n, -2, 2, terms=2, truncate=False)
            return FiniteRank(phi, v)
        return Scale(spec.random(rng, nonzero=True, height=3))

    def build(d):
        if d <= 0 or rng.random() < 0.3:
            return leaf()
        k = rng.random()
        if k < 0.45:
            return Compose(tuple(build(d - 1) for _ in range(rng.randint(2, 3))))
        if k < 0.85:
            return Sum(tuple(build(d - 1) for _ in range(rng.randint(2, 3))))
        g = build(d - 1)
        return Sum((Sum((g, build(d - 1))), Compose((Scale(-spec.one()), g))))

    return build(depth)


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        self.violations.append(msg)

    def lines(self) -> list:
        head = f"{self.name}: {'PASS' if self.ok else 'FAIL'} ({self.checks} checks, {len(self.violations)} violations)"
        return [head] + [f"  - {v}" for v in self.violations[:10]]


def idempotent_suite(n: int, spec: FieldSpec, seed: int = 0, samples: int = 100) -> list:
    """Check the good-idempotent axioms for P_i^+ = Proj(i, 0)."""
    rng = random.Random(seed)
    comm = SuiteReport(f"n={n} [P_i+, P_j+] = 0")
    idem = SuiteReport(f"n={n} P_i+ o P_i+ = P_i+")
    plus = SuiteReport(f"n={n} P_i+ A in I_i+")
    minus = SuiteReport(f"n={n} P_i- A in I_i-")
    for k in range(samples):
        x = random_series(rng, spec, n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                a = apply(Compose((Proj(i, 0), Proj(j, 0))), x)
                b = apply(Compose((Proj(j, 0), Proj(i, 0))), x)
                comm.checks += 1
                if a != b:
                    comm.fail(f"sample {k}: P{i} P{j} != P{j} P{i} on {x}")
            idem.checks += 1
            if apply(Compose((Proj(i, 0), Proj(i, 0))), x) != apply(Proj(i, 0), x):
                idem.fail(f"sample {k}: P{i}^2 != P{i} on {x}")
        g = random_operator(rng, spec, n)
        for i in range(1, n + 1):
            plus.checks += 1
            if classify_tate(Compose((Proj(i, 0), g)), n, spec).plus(i) != IN:
                plus.fail(f"sample {k}: P{i}+ o {format_operator(g)} not in I{i}+")
            minus.checks += 1
            if classify_tate(Compose((CoProj(i, 0), g)), n, spec).minus(i) != IN:
                minus.fail(f"sample {k}: P{i}- o {format_operator(g)} not in I{i}-")
    return [comm, idem, plus, minus]
