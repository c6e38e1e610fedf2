"""Small worked geometric instances.

* Hensel lifting of the coefficient field of the completion of F_p[x] at (f).
* The adele factors of the affine line at a closed point and of the plane along
  the flag ((0) > (y) > (x, y)).
* The cusp s^2 = t^3 normalized by t -> u^2, s -> u^3, where lattices generated
  by polynomials in s, t only reach valuations in the semigroup <2, 3>.
* Open sets V = sum U_i t2^i of the natural topology and the factorization
  showing V * V covers every monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

from . import poly
from .basefield import FieldSpec, QQ, finite_ext, finite_prime
from .errors import NotCoprime, NotIrreducible, NotStandardForm, SchemaError
from .lattice import MonomialSubspace, canonical, from_rows, is_lattice, sandwich, standard
from .series import TruncatedSeries, lex_valuation, lift_std, polynomial, residue, s_inv

# ---------------------------------------------------------------- Hensel


@dataclass(frozen=True)
class CompletionModel:
    """Coefficient field of ``F_p[x]`` completed at ``(f)``, to precision ``pi^N``.

    ``a`` is the polynomial (mod ``f^N``) that the class of ``x`` in ``kappa`` maps
    to; ``digits`` is its ``f``-adic expansion as a series in ``pi`` over ``kappa``.
    ``table[k]`` holds the digits of ``a^k`` for the basis ``x^k`` of ``kappa``.
    """

    p: int
    f: tuple
    N: int
    kappa: FieldSpec
    a: tuple
    digits: TruncatedSeries
    table: tuple
    error_exponents: tuple

    def residual_valuation(self) -> int:
        """``v_f(f(a))``, capped at ``N``."""
        return _fadic_valuation(poly.compose(self.f, self.a, self.p), self.f, self.p, self.N)


def _residue_field(p: int, f: tuple) -> FieldSpec:
    return finite_prime(p) if poly.deg(f) == 1 else finite_ext(p, f)


def _fadic_valuation(g: tuple, f: tuple, p: int, cap: int) -> int:
    v = 0
    while g and v < cap:
        q, r = poly.divmod_(g, f, p)
        if r:
            break
        g, v = q, v + 1
    return cap if not g else v


def fadic_digits(g: tuple, f: tuple, p: int, N: int) -> list:
    """``g = sum c_j f^j`` with ``deg c_j < deg f``, for ``j < N``."""
    out = []
    for _ in range(N):
        g, r = poly.divmod_(g, f, p)
        out.append(r)
    return out


def _as_series(digits: list, kappa: FieldSpec, N: int) -> TruncatedSeries:
    if kappa.kind == "Fp":
        coeffs = {(j,): (c[0] if c else 0) for j, c in enumerate(digits)}
    else:
        coeffs = {(j,): c for j, c in enumerate(digits)}
    return polynomial(kappa, 1, coeffs, (N,))


def _check_irreducible(p: int, f) -> tuple:
    if not poly.is_prime(p):
        raise SchemaError(f"p must be prime, got {p}")
    f = poly.trim(f, p)
    if poly.deg(f) < 1 or f[-1] != 1:
        raise SchemaError("f must be monic of degree >= 1")
    if not poly.is_irreducible(f, p):
        raise NotIrreducible(f"{poly.format_poly(f)} is reducible over F_{p}")
    return f


def hensel_coefficient_field(p: int, f, N: int) -> CompletionModel:
    """Newton iteration ``a <- a - f(a)/f'(a)`` starting from ``a = x``, doubling precision."""
    f = _check_irreducible(p, f)
    if N < 1:
        raise SchemaError("precision N must be at least 1")
    df = poly.derivative(f, p)
    a: tuple = poly.trim((0, 1), p)
    errors = [_fadic_valuation(poly.compose(f, a, p), f, p, N)]
    e = 1
    while e < N:
        e = min(2 * e, N)
        M = _power(f, e, p)
        g, s, _ = poly.ext_gcd(poly.compose(df, a, p, M), M, p)
        if g != (1,):
            raise NotIrreducible("f is not separable")  # cannot happen over a finite field
        a = poly.mod(poly.sub(a, poly.mul(poly.compose(f, a, p, M), s, p), p), M, p)
        errors.append(_fadic_valuation(poly.compose(f, a, p), f, p, N))
    MN = _power(f, N, p)
    a = poly.mod(a, MN, p)
    kappa = _residue_field(p, f)
    table = []
    for k in range(poly.deg(f)):
        ak = poly.powmod(a, k, MN, p) if MN and poly.deg(MN) > 0 else ()
        table.append(_as_series(fadic_digits(ak, f, p, N), kappa, N))
    return CompletionModel(p, f, N, kappa, a, _as_series(fadic_digits(a, f, p, N), kappa, N), tuple(table), tuple(errors))


def _power(f: tuple, e: int, p: int) -> tuple:
    out: tuple = (1,)
    for _ in range(e):
        out = poly.mul(out, f, p)
    return out


# ---------------------------------------------------------------- adeles


@dataclass(frozen=True)
class LineAdele:
    """The 1-local field ``kappa((pi))`` at the point ``(f)`` of the affine line."""

    p: int
    f: tuple
    kappa: FieldSpec

    def describe(self) -> list:
        k = f"F_{self.kappa.order}"
        return [
            f"flag ((0) > ({poly.format_poly(self.f)})) on A^1 over F_{self.p}",
            f"field     {k}((pi)), pi = {poly.format_poly(self.f)}",
            f"integers  O_1 = {k}[[pi]]",
            f"residue   {k}",
        ]

    def to_json(self) -> dict:
        return {"p": self.p, "f": list(self.f), "kappa": self.kappa.to_json(), "field": f"F_{self.kappa.order}((pi))"}

    def element(self, coeffs: dict, prec: Optional[int] = None) -> TruncatedSeries:
        """A Laurent polynomial in ``pi`` over ``kappa``, keyed by the exponent of ``pi``."""
        return polynomial(self.kappa, 1, {(k,): v for k, v in coeffs.items()}, None if prec is None else (prec,))

    def invert(self, a: TruncatedSeries, prec: int) -> TruncatedSeries:
        return s_inv(a, (prec,))


def adele_line(p: int, f) -> LineAdele:
    f = _check_irreducible(p, f)
    return LineAdele(p, f, _residue_field(p, f))


@dataclass(frozen=True)
class StaircaseStep:
    level: int
    field: str
    ring: str
    residue_field: str
    arity: int


@dataclass(frozen=True)
class PlaneAdele:
    """``K = k((x))((y))`` with ``x = t1``, ``y = t2`` and its two residue steps."""

    k: FieldSpec
    steps: tuple = field(default_factory=tuple)

    def residue(self, level: int, a: TruncatedSeries) -> TruncatedSeries:
        """From the field of step ``level`` down to its residue field."""
        self._check(level, a)
        return residue(a)

    def lift(self, level: int, a: TruncatedSeries) -> TruncatedSeries:
        """The constant section of :meth:`residue`."""
        if a.n != 2 - level:
            raise SchemaError(f"step {level} lifts arity {2 - level} series")
        return lift_std(a)

    def valuation(self, a: TruncatedSeries) -> tuple:
        """Lex valuation as ``(x-exponent, y-exponent)``."""
        return lex_valuation(a)

    def element(self, coeffs: dict) -> TruncatedSeries:
        return polynomial(self.k, 2, coeffs)

    def _check(self, level: int, a: TruncatedSeries) -> None:
        if level not in (1, 2):
            raise SchemaError("the plane staircase has steps 1 and 2")
        if a.n != 3 - level:
            raise SchemaError(f"step {level} takes arity {3 - level} series")

    def describe(self) -> list:
        out = [f"flag ((0) > (y) > (x, y)) on A^2 over {self.k}"]
        for s in self.steps:
            out.append(f"step {s.level}: {s.field}  >  {s.ring}  ->>  {s.residue_field}")
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k.to_json(),
            "steps": [{"level": s.level, "field": s.field, "ring": s.ring, "residue": s.residue_field, "arity": s.arity} for s in self.steps],
        }


def adele_plane_smooth(k: FieldSpec = QQ) -> PlaneAdele:
    steps = (
        StaircaseStep(1, "K = k((x))((y))", "O_1 = k((x))[[y]]", "k_1 = k((x))", 2),
        StaircaseStep(2, "k_1 = k((x))", "O_2 = k[[x]]", "k_2 = k", 1),
    )
    return PlaneAdele(k, steps)


# ---------------------------------------------------------------- cusp

REALIZABLE = "REALIZABLE"
UNREALIZABLE = "UNREALIZABLE"


def semigroup_gaps(gens) -> frozenset:
    """Non-negative integers outside the numerical semigroup generated by ``gens``."""
    gens = sorted({int(g) for g in gens})
    if not gens or gens[0] <= 0:
        raise SchemaError("generators must be positive integers")
    g = 0
    for x in gens:
        g = gcd(g, x)
    if g != 1:
        raise NotCoprime(f"gcd{tuple(gens)} = {g}")
    # Once min(gens) consecutive members appear, every larger integer is a member.
    member = [True]
    run, gaps, k = 1, set(), 0
    while run < gens[0]:
        k += 1
        hit = any(k >= x and member[k - x] for x in gens)
        member.append(hit)
        if hit:
            run += 1
        else:
            run = 0
            gaps.add(k)
    return frozenset(gaps)


def semigroup_word(v: int, gens=(2, 3)) -> Optional[tuple]:
    """Non-negative multiplicities ``c`` with ``sum c_i gens_i = v``, or ``None``."""
    best: dict = {0: tuple(0 for _ in gens)}
    for k in range(1, v + 1):
        for i, g in enumerate(gens):
            if k >= g and (k - g) in best:
                c = list(best[k - g])
                c[i] += 1
                best[k] = tuple(c)
                break
    return best.get(v)


@dataclass(frozen=True)
class CuspVerdict:
    verdict: str
    v: int
    generator: Optional[str] = None
    gap: Optional[int] = None

    def lines(self) -> list:
        if self.verdict == REALIZABLE:
            return [f"u^{self.v} k[[u]]: {REALIZABLE}, generated by {self.generator} (= u^{self.v})"]
        return [
            f"u^{self.v} k[[u]]: {UNREALIZABLE}",
            f"  every polynomial in s = u^3, t = u^2 has u-support in <2, 3>; {self.gap} is a gap",
        ]


def _standard_exponent(target) -> int:
    if not isinstance(target, MonomialSubspace) or target.n != 1:
        raise NotStandardForm("target must be an arity-1 monomial lattice in u")
    ok, why = is_lattice(target)
    if not ok:
        raise NotStandardForm(f"target is not a lattice: {why}")
    m, M = sandwich(target)
    if m != M:
        raise NotStandardForm(f"target is not of the form u^v k[[u]] (between u^{M} and u^{m})")
    return m


def cusp_is_beilinson_realizable(target) -> CuspVerdict:
    """Is ``u^v k[[u]]`` generated by an element coming from ``k[s, t]`` under ``t -> u^2, s -> u^3``?"""
    v = _standard_exponent(target)
    if v < 0:
        raise NotStandardForm(f"u^{v} k[[u]] is not integral; polynomials in s, t have u-valuation >= 0")
    if v in semigroup_gaps((2, 3)):
        return CuspVerdict(UNREALIZABLE, v, gap=v)
    i, j = semigroup_word(v, (2, 3))
    parts = [f"t^{i}" if i > 1 else "t" if i == 1 else "", f"s^{j}" if j > 1 else "s" if j == 1 else ""]
    return CuspVerdict(REALIZABLE, v, generator="*".join(x for x in parts if x) or "1")


def strictness_witnesses() -> dict:
    """Executable witnesses for the two strict inclusions between lattice notions."""
    not_beilinson = standard(1, 1)
    not_standard = from_rows(2, -1, [standard(1, 2)])
    return {
        "standard_not_beilinson": (not_beilinson, cusp_is_beilinson_realizable(not_beilinson)),
        "tate_not_standard": (not_standard, is_lattice(not_standard)[0], sandwich(canonical(not_standard))),
    }


# ---------------------------------------------------------------- natural topology


@dataclass(frozen=True)
class OpenProfile:
    """``V = sum U_i t2^i`` with ``U_i = {a1 >= lower(i)}`` below ``threshold`` and FULL from it on.

    ``lower(i) = exceptions[i]`` if listed, else ``base + slope * i``.
    """

    threshold: int
    base: int = 0
    slope: int = 0
    exceptions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "exceptions", tuple(sorted(dict(self.exceptions).items())))

    def lower(self, i: int) -> Optional[int]:
        if i >= self.threshold:
            return None
        return dict(self.exceptions).get(i, self.base + self.slope * i)

    def __contains__(self, e) -> bool:
        a1, a2 = e
        lo = self.lower(a2)
        return lo is None or a1 >= lo

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "base": self.base, "slope": self.slope, "exceptions": [list(x) for x in self.exceptions]}


def parshin_factor(V: OpenProfile, e: tuple) -> tuple:
    """Two exponents in ``V`` summing to ``e``.

    The first factor carries ``t2^threshold`` where ``U`` is FULL; the second
    absorbs the rest of the t2-exponent and just enough t1 to land in ``V``.
    """
    a1, a2 = e
    j = a2 - V.threshold
    lo = V.lower(j)
    c = 0 if lo is None else max(0, lo)
    return (a1 - c, V.threshold), (c, j)


@dataclass
class CoverReport:
    box: tuple
    factors: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = []
        for e, (x, y) in sorted(self.factors.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            out.append(f"t1^{e[0]} t2^{e[1]} = (t1^{x[0]} t2^{x[1]}) * (t1^{y[0]} t2^{y[1]})")
        out.append(f"{len(self.factors)} of {len(self.factors) + len(self.failures)} monomials factored inside V*V")
        return out


def parshin_cover(V: OpenProfile, box: tuple, factor: Callable = parshin_factor) -> CoverReport:
    """Factor every monomial of ``box = (range_a1, range_a2)`` as a product of two members of ``V``."""
    rep = CoverReport(box)
    for a2 in box[1]:
        for a1 in box[0]:
            x, y = factor(V, (a1, a2))
            if x in V and y in V and (x[0] + y[0], x[1] + y[1]) == (a1, a2):
                rep.factors[(a1, a2)] = (x, y)
            else:
                rep.failures.append((a1, a2))
    return rep
