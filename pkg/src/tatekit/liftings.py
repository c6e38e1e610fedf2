"""Coefficient-field liftings k((t1)) -> k((t1))((t2)) and a falsifier for twisted ones.

The standard lifting embeds a series as a t2-constant. A twisted lifting sends
finitely many monomial generators ``b_i = t1^(d_i)`` to ``b_i + t1^(Q(i)) t2``
while keeping ``b_0 = t1`` fixed; it is evaluated multiplicatively to
t2-precision 2, which is where the perturbation lives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .basefield import FieldSpec
from .errors import EmptyPrecision, NotInGeneratedModel, PreconditionViolated, SchemaError
from .series import BoundCertificate, SliceRule, TruncatedSeries, lift_std, monomial, polynomial, residue, s_mul, series, truncate

STANDARD = "STANDARD"
TWISTED = "TWISTED"
MORPHISM_PLAUSIBLE = "MORPHISM_PLAUSIBLE"
NOT_A_TATE_MORPHISM = "NOT_A_TATE_MORPHISM"
T2_PRECISION = 2


@dataclass(frozen=True)
class LiftingSpec:
    """``gens`` maps generator index to degree ``d_i``; ``Q`` maps perturbed indices to ``Q(i)``.

    Indices missing from ``Q`` are unperturbed.
    """

    mode: str = STANDARD
    gens: tuple = ()
    Q: tuple = ()

    def __post_init__(self):
        gens = tuple(sorted((int(i), int(d)) for i, d in dict(self.gens).items()))
        Q = tuple(sorted((int(i), int(q)) for i, q in dict(self.Q).items()))
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "Q", Q)
        if self.mode not in (STANDARD, TWISTED):
            raise SchemaError(f"unknown lifting mode {self.mode!r}")
        if self.mode == STANDARD and (gens or Q):
            raise SchemaError("the standard lifting takes no generator data")
        degrees = [d for _, d in gens]
        if len(set(degrees)) != len(degrees):
            raise SchemaError("generators must be distinct")
        if any(d < 0 for d in degrees):
            raise SchemaError("generator degrees must be non-negative")
        unknown = set(dict(Q)) - set(dict(gens))
        if unknown:
            raise SchemaError(f"perturbation for unknown generators {sorted(unknown)}")

    @property
    def degree(self) -> dict:
        return dict(self.gens)

    @property
    def perturbation(self) -> dict:
        return dict(self.Q)

    def has_fixed_t1(self) -> bool:
        return self.degree.get(0) == 1 and 0 not in self.perturbation

    def to_json(self) -> dict:
        return {"mode": self.mode, "gens": [list(g) for g in self.gens], "Q": [list(q) for q in self.Q]}

    @classmethod
    def from_json(cls, obj, path: str = "$") -> "LiftingSpec":
        if not isinstance(obj, dict):
            raise SchemaError("lifting spec must be an object", path)
        try:
            return cls(obj.get("mode", STANDARD), tuple(map(tuple, obj.get("gens", []))), tuple(map(tuple, obj.get("Q", []))))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(str(exc), path) from None


PRESETS = {
    "neg-identity": lambda i: -i,
    "pos-identity": lambda i: i,
    "zero": lambda i: 0,
}


def twisted(preset: str, radius: int) -> LiftingSpec:
    """``b_0 = t1`` fixed, ``b_i = t1^i`` for ``2 <= i <= radius + 1`` with ``Q`` from ``preset``.

    Index 1 is left out because ``t1^1`` is already ``b_0``.
    """
    if preset not in PRESETS:
        raise SchemaError(f"unknown Q preset {preset!r}; choose from {sorted(PRESETS)}")
    q = PRESETS[preset]
    idx = range(2, radius + 2)
    return LiftingSpec(TWISTED, ((0, 1),) + tuple((i, i) for i in idx), tuple((i, q(i)) for i in idx))


def _generator_image(spec: LiftingSpec, fs: FieldSpec, i: int) -> TruncatedSeries:
    d = spec.degree[i]
    coeffs = {(d, 0): 1}
    if i in spec.perturbation:
        e = (spec.perturbation[i], 1)
        coeffs[e] = coeffs.get(e, 0) + 1
    return polynomial(fs, 2, coeffs, (None, T2_PRECISION))


def word(spec: LiftingSpec, d: int) -> list:
    """Generator indices whose product spells ``t1^d`` (negative powers of b_0 allowed)."""
    if d == 0:
        return []
    by_degree = {deg: i for i, deg in spec.gens}
    if d in by_degree and by_degree[d] != 0:
        return [by_degree[d]]
    if spec.has_fixed_t1():
        return [0] * abs(d) if d > 0 else [("inv", 0)] * (-d)
    raise NotInGeneratedModel(f"t1^{d} is not a product of the listed generators")


def _lift_monomial(spec: LiftingSpec, fs: FieldSpec, d: int) -> TruncatedSeries:
    out = polynomial(fs, 2, {(0, 0): 1}, (None, T2_PRECISION))
    for letter in word(spec, d):
        if isinstance(letter, tuple):
            factor = polynomial(fs, 2, {(-1, 0): 1}, (None, T2_PRECISION))  # b_0 = t1 is fixed
        else:
            factor = _generator_image(spec, fs, letter)
        out = s_mul(out, factor)
    return out


def lift(spec: LiftingSpec, a: TruncatedSeries) -> TruncatedSeries:
    """Lift an arity-1 series to arity 2."""
    if a.n != 1:
        raise SchemaError("liftings take arity-1 series")
    if spec.mode == STANDARD:
        return lift_std(a)
    if a.cert.hi[0] is not None:
        raise EmptyPrecision("twisted lifting needs an exact input (no t1 cutoff)")
    out: dict = {}
    for (d,), c in a.terms:
        for e, v in _lift_monomial(spec, a.spec, d).terms:
            out[e] = out[e] + c * v if e in out else c * v
    out = {e: c for e, c in out.items() if not c.is_zero()}
    rows = {r: min((e[0] for e in out if e[1] == r), default=None) for r in range(T2_PRECISION)}
    base = rows[0] if rows[0] is not None else 0
    exc = tuple((r, b) for r, b in rows.items() if r > 0 and b is not None and b != base)
    cert = BoundCertificate(0, (SliceRule(base, 0, exc),), (None, T2_PRECISION))
    return series(a.spec, 2, out, cert)


def lift_truncated(spec: LiftingSpec, a: TruncatedSeries) -> TruncatedSeries:
    """``lift`` cut to t2-precision 2 so standard and twisted results are comparable."""
    return truncate(lift(spec, a), (None, T2_PRECISION))


@dataclass(frozen=True)
class FalsifierWitness:
    m: int
    index: int
    exponent: tuple

    def __str__(self) -> str:
        return f"m={self.m}: b_{self.index} lifts onto t1^{self.exponent[0]} t2^{self.exponent[1]}, outside t1^{-self.m} O"


@dataclass(frozen=True)
class FalsifierVerdict:
    verdict: str
    radius: int
    lattice_m: Optional[int] = None
    witnesses: tuple = field(default_factory=tuple)

    def lines(self) -> list:
        if self.verdict == MORPHISM_PLAUSIBLE:
            return [f"{self.verdict} at radius {self.radius}: all generator images lie in a1 >= {-self.lattice_m}"]
        return [f"{self.verdict} at radius {self.radius}"] + [f"  {w}" for w in self.witnesses]


def falsify_tate(spec: LiftingSpec, radius: int, fs: Optional[FieldSpec] = None) -> FalsifierVerdict:
    """Can the images of the generators ``b_i`` (``i <= radius + 1``) share one lattice ``a1 >= -m``, ``m <= radius``?"""
    from .basefield import QQ

    if radius < 1:
        raise SchemaError("radius must be at least 1")
    fs = fs or QQ
    if spec.mode == STANDARD:
        images = [(i, lift_std(monomial(fs, (i,)))) for i in range(radius + 2)]
    else:
        images = [(i, lift(spec, monomial(fs, (d,)))) for i, d in spec.gens if i <= radius + 1]
    witnesses = []
    for m in range(radius + 1):
        bad = next(((i, e) for i, img in images for e, _ in img.terms if e[0] < -m), None)
        if bad is None:
            return FalsifierVerdict(MORPHISM_PLAUSIBLE, radius, lattice_m=m)
        witnesses.append(FalsifierWitness(m, bad[0], bad[1]))
    return FalsifierVerdict(NOT_A_TATE_MORPHISM, radius, witnesses=tuple(witnesses))


def check_witness(spec: LiftingSpec, w: FalsifierWitness, fs: Optional[FieldSpec] = None) -> bool:
    """Recompute the generator image and confirm it reaches below ``-m``."""
    from .basefield import QQ

    fs = fs or QQ
    img = lift(spec, monomial(fs, (spec.degree[w.index],)))
    return w.exponent[0] < -w.m and img.coefficient(w.exponent) not in (None, fs.zero())


def fixes_rational_subfield(spec: LiftingSpec, samples, fs: Optional[FieldSpec] = None) -> bool:
    """Does the lifting fix ``t1`` (through ``b_0``) and ``t2`` on the given polynomials in t1?

    ``samples`` is a list of arity-1 Laurent polynomials, evaluated as polynomials
    in ``b_0`` multiplicatively.
    """
    from .basefield import QQ

    fs = fs or QQ
    if spec.mode == STANDARD:
        return all(residue(lift_std(a)) == a for a in samples)
    if not spec.has_fixed_t1():
        raise PreconditionViolated("needs b_0 = t1 among the generators, unperturbed")
    b0 = _generator_image(spec, fs, 0)
    t2 = polynomial(fs, 2, {(0, 1): 1}, (None, T2_PRECISION))
    for a in samples:
        if a.cert.hi[0] is not None:
            raise EmptyPrecision("samples must be exact")
        total = polynomial(fs, 2, {}, (None, T2_PRECISION))
        for (d,), c in a.terms:
            term = polynomial(fs, 2, {(0, 0): c}, (None, T2_PRECISION))
            for _ in range(abs(d)):
                term = s_mul(term, b0 if d > 0 else polynomial(fs, 2, {(-1, 0): 1}, (None, T2_PRECISION)))
            total = total + term
        if dict(total.terms) != dict(lift_truncated(LiftingSpec(), a).terms):
            return False
        # t2 is fixed: sigma(b_0) * t2 = t1 t2 within precision.
        if dict(s_mul(b0, t2).terms) != {(1, 1): fs.one()}:
            return False
    return True


def slicewise_operator(spec: LiftingSpec):
    """The operator on V(2) applying the lifting to each t2-row.

    Only the standard lifting is k((t1))-linear, and row by row it is the identity.
    """
    from .operators import Id

    if spec.mode != STANDARD:
        raise PreconditionViolated("a twisted lifting is not k((t1))-linear, so it has no operator form")
    return Id()
