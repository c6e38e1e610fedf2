"""Deterministic property suites behind ``tatekit suite run``.

Each suite returns a list of :class:`SuiteReport`; a suite passes when none of
its reports recorded a violation. Randomness comes from one ``random.Random``
per suite seeded from ``(seed, suite name)``, so equal configs give identical
reports.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from . import lattice as lat
from . import poly
from .basefield import QQ, finite_ext, finite_prime
from .errors import EmptyPrecision, UnknownSuite
from .geometry import (
    REALIZABLE,
    UNREALIZABLE,
    OpenProfile,
    cusp_is_beilinson_realizable,
    hensel_coefficient_field,
    parshin_cover,
    semigroup_gaps,
)
from .liftings import MORPHISM_PLAUSIBLE, NOT_A_TATE_MORPHISM, LiftingSpec, check_witness, falsify_tate, lift, twisted
from .operators import (
    IN,
    Compose,
    SuiteReport,
    apply,
    classify_tate,
    classify_yekutieli,
    compare_routes,
    decompose,
    format_operator,
    idempotent_suite,
    random_operator,
    random_series,
    transfer,
)
from .series import agree, lex_compare, lex_valuation, one, polynomial, residue, s_add, s_inv, s_mul, s_neg, zero

SUITES = ("ring", "lattice", "cubical", "agreement", "liftings", "geometry")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    ring: int = 200
    lattice: int = 200
    cubical: int = 100
    transfer: int = 1000
    agreement: int = 200
    liftings: int = 50
    radius: int = 8
    fmt: str = "text"

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")


@dataclass
class RunResult:
    cfg: RunConfig
    suites: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for reps in self.suites.values() for r in reps)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def text(self) -> str:
        out = [f"tatekit suites, seed {self.cfg.seed}"]
        for name, reps in self.suites.items():
            status = "PASS" if all(r.ok for r in reps) else "FAIL"
            out.append(f"== {name}: {status}")
            for r in reps:
                out.extend("  " + line for line in r.lines())
        out.append(f"overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out) + "\n"

    def json(self) -> str:
        obj = {
            "seed": self.cfg.seed,
            "ok": self.ok,
            "suites": {
                name: [{"name": r.name, "checks": r.checks, "violations": r.violations} for r in reps]
                for name, reps in self.suites.items()
            },
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- ring


def _field_laws(rng: random.Random, samples: int) -> list:
    reps = []
    for spec in (QQ, finite_prime(5), finite_ext(5, (3, 0, 1))):
        laws = {
            "a+(b+c) = (a+b)+c": lambda a, b, c: a + (b + c) == (a + b) + c,
            "a+b = b+a": lambda a, b, c: a + b == b + a,
            "a(bc) = (ab)c": lambda a, b, c: a * (b * c) == (a * b) * c,
            "ab = ba": lambda a, b, c: a * b == b * a,
            "a(b+c) = ab+ac": lambda a, b, c: a * (b + c) == a * b + a * c,
            "a+0 = a, a*1 = a": lambda a, b, c: a + spec.zero() == a and a * spec.one() == a,
            "a + (-a) = 0": lambda a, b, c: (a + -a).is_zero(),
            "a * a^-1 = 1": lambda a, b, c: a.is_zero() or (a * (spec.one() / a)).is_one(),
        }
        for law, check in laws.items():
            rep = SuiteReport(f"{spec}: {law}")
            for _ in range(samples):
                a, b, c = (spec.random(rng) for _ in range(3))
                rep.checks += 1
                if not check(a, b, c):
                    rep.fail(f"a={a}, b={b}, c={c}")
            reps.append(rep)
    return reps


def _poly(rng: random.Random, spec, n: int, nonzero: bool = False):
    # Exponents stay within a window of width 8 per axis.
    coeffs = {tuple(rng.randint(-4, 3) for _ in range(n)): spec.random(rng, nonzero=True, height=5) for _ in range(rng.randint(1 if nonzero else 0, 4))}
    return polynomial(spec, n, coeffs)


def _series_laws(rng: random.Random, samples: int) -> list:
    laws = {
        "a+(b+c) = (a+b)+c": lambda a, b, c: s_add(a, s_add(b, c)) == s_add(s_add(a, b), c),
        "a+b = b+a": lambda a, b, c: s_add(a, b) == s_add(b, a),
        "a(bc) = (ab)c": lambda a, b, c: s_mul(a, s_mul(b, c)) == s_mul(s_mul(a, b), c),
        "ab = ba": lambda a, b, c: s_mul(a, b) == s_mul(b, a),
        "a(b+c) = ab+ac": lambda a, b, c: agree(s_mul(a, s_add(b, c)), s_add(s_mul(a, b), s_mul(a, c))),
        "a+0 = a, a*1 = a": lambda a, b, c: agree(s_add(a, zero(a.spec, a.n)), a) and agree(s_mul(a, one(a.spec, a.n)), a),
        "a + (-a) = 0": lambda a, b, c: s_add(a, s_neg(a)).is_zero(),
    }
    reps = []
    for law, check in laws.items():
        rep = SuiteReport(f"series: {law}")
        for _ in range(samples):
            spec = rng.choice([QQ, finite_prime(5)])
            n = rng.randint(1, 3)
            a, b, c = (_poly(rng, spec, n) for _ in range(3))
            rep.checks += 1
            if not check(a, b, c):
                rep.fail(f"a={a}, b={b}, c={c}")
        reps.append(rep)
    return reps


def _inversion(rng: random.Random, samples: int) -> SuiteReport:
    rep = SuiteReport("series: s_mul(a, s_inv(a, p)) = 1 on the window p")
    done = 0
    while done < samples:
        n = rng.randint(1, 3)
        a = _poly(rng, QQ, n, nonzero=True)
        prec = tuple(rng.randint(-1, 4) for _ in range(n))
        try:
            b = s_inv(a, prec)
        except EmptyPrecision:
            continue
        done += 1
        rep.checks += 1
        prod = s_mul(a, b)
        if not agree(prod, one(QQ, n)) or any(h is None or h < p for p, h in zip(prec, prod.cert.hi)):
            rep.fail(f"a={a}, p={prec}: product {prod}")
    return rep


def _valuation(rng: random.Random, samples: int) -> list:
    add = SuiteReport("valuation: v(ab) = v(a) + v(b)")
    ultra = SuiteReport("valuation: v(a+b) >= min(v(a), v(b)) lex, equality if they differ")
    for _ in range(samples):
        n = rng.randint(1, 3)
        a, b = _poly(rng, QQ, n, nonzero=True), _poly(rng, QQ, n, nonzero=True)
        va, vb = lex_valuation(a), lex_valuation(b)
        add.checks += 1
        if lex_valuation(s_mul(a, b)) != tuple(x + y for x, y in zip(va, vb)):
            add.fail(f"a={a}, b={b}")
        s = s_add(a, b)
        ultra.checks += 1
        if s.is_zero():
            continue
        lo = va if lex_compare(va, vb) <= 0 else vb
        vs = lex_valuation(s)
        if lex_compare(vs, lo) < 0 or (va != vb and vs != lo):
            ultra.fail(f"a={a}, b={b}")
    return [add, ultra]


def suite_ring(cfg: RunConfig) -> list:
    rng = cfg.rng("ring")
    return _field_laws(rng, cfg.ring) + _series_laws(rng, cfg.ring) + [_inversion(rng, cfg.ring)] + _valuation(rng, cfg.ring)


# ---------------------------------------------------------------- lattice

W = 3  # brute-force window per axis


def _family() -> list:
    """Every monomial lattice of V(2) with explicit rows in ``[0, W)`` and slices decided on ``[0, W)``."""
    slices = [lat.ZERO, lat.FULL] + [
        lat.MonomialSubspace(1, 0, tuple(lat.FULL if bits >> i & 1 else lat.ZERO for i in range(W)), lat.ZERO, lat.FULL)
        for bits in range(2**W)
    ]
    return [lat.MonomialSubspace(2, 0, rows, lat.ZERO, lat.FULL) for rows in itertools.product(slices, repeat=W)]


def _mask(S, box) -> frozenset:
    return frozenset(lat.members_in_box(S, box))


def suite_lattice(cfg: RunConfig) -> list:
    rng = cfg.rng("lattice")
    box = (range(-2, W + 2), range(-1, W + 1))
    fam = _family()
    masks = [_mask(S, box) for S in fam]
    mask_set = set(masks)
    extremal = SuiteReport(f"meet/join are extremal among all {len(fam)} lattices in the window")
    for _ in range(cfg.lattice):
        i, j = rng.randrange(len(fam)), rng.randrange(len(fam))
        inter, union = masks[i] & masks[j], masks[i] | masks[j]
        below = frozenset().union(*[m for m in masks if m <= inter])
        above = frozenset(set.intersection(*[set(m) for m in masks if union <= m]))
        extremal.checks += 1
        if below not in mask_set or above not in mask_set:
            extremal.fail(f"family not closed for pair {i}, {j}")
        if _mask(lat.meet(fam[i], fam[j]), box) != below or _mask(lat.join(fam[i], fam[j]), box) != above:
            extremal.fail(f"pair {lat.describe(fam[i])} / {lat.describe(fam[j])}")
    sandwich = SuiteReport("sandwich bounds are tight standard lattices")
    for S in fam:
        m, M = lat.sandwich(S)
        sandwich.checks += 1
        ok = lat.contains(lat.standard(2, m), S) and lat.contains(S, lat.standard(2, M))
        ok = ok and not lat.contains(lat.standard(2, m + 1), S) and not lat.contains(S, lat.standard(2, M - 1))
        if not ok:
            sandwich.fail(lat.describe(S))
    order = SuiteReport("contains agrees with membership on the box")
    for _ in range(cfg.lattice):
        i, j = rng.randrange(len(fam)), rng.randrange(len(fam))
        order.checks += 1
        if lat.contains(fam[i], fam[j]) != (masks[j] <= masks[i]):
            order.fail(f"pair {i}, {j}")
    return [extremal, sandwich, order]


# ---------------------------------------------------------------- cubical


def suite_cubical(cfg: RunConfig) -> list:
    rng = cfg.rng("cubical")
    reps = []
    for n in (2, 3):
        reps += idempotent_suite(n, QQ, seed=rng.randrange(2**32), samples=cfg.cubical)
    dec = SuiteReport("P_i+ f + P_i- f = f, with P_i+ f in I_i+ and P_i- f in I_i-")
    ideal = SuiteReport("I_i+ and I_i- are two-sided ideals")
    for _ in range(cfg.cubical):
        n = rng.choice([2, 3])
        f = random_operator(rng, QQ, n)
        x = random_series(rng, QQ, n, truncate=False)
        i = rng.randint(1, n)
        fp, fm = decompose(f, i)
        dec.checks += 1
        if not agree(s_add(apply(fp, x), apply(fm, x)), apply(f, x)):
            dec.fail(f"f={format_operator(f)}, x={x}")
        if classify_tate(fp, n, QQ).plus(i) != IN or classify_tate(fm, n, QQ).minus(i) != IN:
            dec.fail(f"parts of f={format_operator(f)} on axis {i} escape their ideals")
    for _ in range(cfg.cubical):
        n = 2
        f, g = random_operator(rng, QQ, n), random_operator(rng, QQ, n)
        flags = classify_tate(f, n, QQ)
        left, right = classify_tate(Compose((g, f)), n, QQ), classify_tate(Compose((f, g)), n, QQ)
        for i in range(1, n + 1):
            for sign, get in (("+", lambda fl: fl.plus(i)), ("-", lambda fl: fl.minus(i))):
                ideal.checks += 1
                if get(flags) == IN and (get(left) != IN or get(right) != IN):
                    ideal.fail(f"axis {i}{sign}: f={format_operator(f)}, g={format_operator(g)}")
    reps += [dec, ideal, suite_transfer(cfg)]
    return reps


def suite_transfer(cfg: RunConfig) -> SuiteReport:
    rng = cfg.rng("transfer")
    rep = SuiteReport(f"transfer: output support inside the predicted window ({cfg.transfer} pairs)")
    for _ in range(cfg.transfer):
        n = rng.choice([1, 2, 3])
        f = random_operator(rng, QQ, n)
        x = random_series(rng, QQ, n, truncate=False)
        t = transfer(f, n, QQ)
        lo = [min((e[i] for e, _ in x.terms), default=0) for i in range(n)]
        hi = [max((e[i] for e, _ in x.terms), default=0) + 1 for i in range(n)]
        for e, _ in apply(f, x).terms:
            rep.checks += 1
            if not t.predicts(lo, hi, e):
                rep.fail(f"f={format_operator(f)}, x={x}: {list(e)} outside prediction")
    return rep


# ---------------------------------------------------------------- agreement


def agreement_corpus(cfg: RunConfig) -> list:
    rng = cfg.rng("agreement")
    return [random_operator(rng, QQ, 2) for _ in range(cfg.agreement)]


def suite_agreement(cfg: RunConfig) -> list:
    corpus = agreement_corpus(cfg)
    agree_rep = SuiteReport(f"classifiers agree on a corpus of {len(corpus)} operators (n=2, radius {cfg.radius})")
    unknown_rep = SuiteReport("probe classifier leaves at most 5% UNKNOWN")
    unknown = total = 0
    for f in corpus:
        c = compare_routes(classify_tate(f, 2, QQ), classify_yekutieli(f, 2, QQ, radius=cfg.radius))
        agree_rep.checks += c["agree"] + c["contradict"] + c["unknown"]
        total += c["agree"] + c["contradict"] + c["unknown"]
        unknown += c["unknown"]
        for d in c["details"]:
            agree_rep.fail(f"{format_operator(f)}: {d}")
    unknown_rep.checks = total
    if total and unknown / total > 0.05:
        unknown_rep.fail(f"{unknown} of {total} verdicts UNKNOWN")
    unknown_rep.name += f" ({unknown} of {total})"
    return [agree_rep, unknown_rep]


# ---------------------------------------------------------------- liftings


def suite_liftings(cfg: RunConfig) -> list:
    rng = cfg.rng("liftings")
    falsify = SuiteReport("falsifier verdicts at radius 10")
    neg = twisted("neg-identity", 10)
    v = falsify_tate(neg, 10)
    falsify.checks += 1
    if v.verdict != NOT_A_TATE_MORPHISM or not all(check_witness(neg, w) for w in v.witnesses):
        falsify.fail(f"Q(i) = -i: {v.lines()}")
    for name, spec in (("standard", LiftingSpec()), ("Q(i) = +i", twisted("pos-identity", 10))):
        falsify.checks += 1
        got = falsify_tate(spec, 10)
        if got.verdict != MORPHISM_PLAUSIBLE or got.lattice_m != 0:
            falsify.fail(f"{name}: {got.lines()}")
    section = SuiteReport("residue(lift(a)) = a")
    specs = [LiftingSpec()] + [twisted(p, 10) for p in ("neg-identity", "pos-identity", "zero")]
    for _ in range(cfg.liftings):
        a = polynomial(QQ, 1, {(rng.randint(-4, 12),): QQ.random(rng, nonzero=True, height=5) for _ in range(rng.randint(0, 4))})
        for spec in specs:
            section.checks += 1
            if dict(residue(lift(spec, a)).terms) != dict(a.terms):
                section.fail(f"{spec.mode} on {a}")
    return [falsify, section]


# ---------------------------------------------------------------- geometry


def suite_geometry(cfg: RunConfig) -> list:
    hensel = SuiteReport("Hensel: p=5, f=x^2-2, N=8 gives a^2 = 2 mod pi^8")
    f = (3, 0, 1)
    m = hensel_coefficient_field(5, f, 8)
    f8 = (1,)
    for _ in range(8):
        f8 = poly.mul(f8, f, 5)
    hensel.checks += 2
    if poly.mod(poly.sub(poly.mul(m.a, m.a, 5), (2,), 5), f8, 5) != ():
        hensel.fail(f"a = {poly.format_poly(m.a)}")
    if poly.mod(m.a, f, 5) != (0, 1):
        hensel.fail("a is not congruent to x mod pi")
    gaps = SuiteReport("numerical semigroup gaps")
    for gens, want in (((2, 3), {1}), ((3, 5), {1, 2, 4, 7})):
        gaps.checks += 1
        if semigroup_gaps(gens) != want:
            gaps.fail(f"gaps{gens} = {sorted(semigroup_gaps(gens))}")
    cusp = SuiteReport("cusp realizability")
    for v, want in ((0, REALIZABLE), (1, UNREALIZABLE), (2, REALIZABLE)):
        got = cusp_is_beilinson_realizable(lat.standard(1, v))
        cusp.checks += 1
        if got.verdict != want or (want == UNREALIZABLE and got.gap != v):
            cusp.fail(f"v={v}: {got.lines()}")
    cover = SuiteReport("Parshin: V*V covers the 7x7 box")
    rep = parshin_cover(OpenProfile(threshold=0, base=0, slope=1), (range(-3, 4), range(-3, 4)))
    cover.checks += 49
    if not rep.ok or len(rep.factors) != 49:
        cover.fail(f"unfactored: {rep.failures}")
    return [hensel, gaps, cusp, cover]


RUNNERS = {
    "ring": suite_ring,
    "lattice": suite_lattice,
    "cubical": suite_cubical,
    "agreement": suite_agreement,
    "liftings": suite_liftings,
    "geometry": suite_geometry,
}


def run_suite(name: str, cfg: RunConfig = RunConfig()) -> RunResult:
    if name != "all" and name not in RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    names = SUITES if name == "all" else (name,)
    return RunResult(cfg, {s: RUNNERS[s](cfg) for s in names})
