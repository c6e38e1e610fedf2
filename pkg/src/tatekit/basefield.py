"""Exact coefficient fields: the rationals and finite fields F_p[x]/(f)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Union

from . import poly
from .errors import DivisionByZero, NotIrreducible, SchemaError, SpecMismatch

MAX_PRIME = 2**31


@dataclass(frozen=True)
class FieldSpec:
    """Which field the scalars live in.

    ``kind`` is ``"Q"``, ``"Fp"`` or ``"Fq"``. For ``"Fq"`` the modulus ``f`` is a
    monic irreducible polynomial over F_p, stored lowest coefficient first.
    """

    kind: str
    p: int | None = None
    f: tuple | None = None

    def __post_init__(self):
        if self.f is not None and not isinstance(self.f, tuple):
            object.__setattr__(self, "f", tuple(self.f))
        if self.kind == "Q":
            if self.p is not None or self.f is not None:
                raise SchemaError("rational field takes no p or f")
            return
        if self.kind not in ("Fp", "Fq"):
            raise SchemaError(f"unknown field kind {self.kind!r}")
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME or not poly.is_prime(self.p):
            raise SchemaError(f"p must be a prime below 2^31, got {self.p!r}")
        if self.kind == "Fp":
            if self.f is not None:
                raise SchemaError("Fp takes no modulus")
            return
        f = poly.trim(self.f or (), self.p)
        if f != tuple(self.f or ()):
            raise SchemaError("modulus must be reduced mod p without trailing zeros")
        if len(f) < 2 or f[-1] != 1:
            raise SchemaError("modulus must be monic of degree >= 1")
        if not poly.is_irreducible(f, self.p):
            raise NotIrreducible(f"{poly.format_poly(f)} is reducible over F_{self.p}")

    @property
    def degree(self) -> int:
        return len(self.f) - 1 if self.kind == "Fq" else 1

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    @property
    def order(self) -> int | None:
        return None if self.kind == "Q" else self.p**self.degree

    def zero(self) -> "FieldScalar":
        return FieldScalar.make(self, 0)

    def one(self) -> "FieldScalar":
        return FieldScalar.make(self, 1)

    def __call__(self, value) -> "FieldScalar":
        return FieldScalar.make(self, value)

    def generator(self) -> "FieldScalar":
        """The class of ``x`` (only meaningful for ``Fq``)."""
        if self.kind != "Fq":
            raise SpecMismatch("generator() needs an extension field")
        return FieldScalar.make(self, (0, 1))

    def random(self, rng: Random, nonzero: bool = False, height: int = 9) -> "FieldScalar":
        while True:
            if self.kind == "Q":
                v = FieldScalar.make(self, Fraction(rng.randint(-height, height), rng.randint(1, height)))
            elif self.kind == "Fp":
                v = FieldScalar.make(self, rng.randrange(self.p))
            else:
                v = FieldScalar.make(self, tuple(rng.randrange(self.p) for _ in range(self.degree)))
            if not (nonzero and v.is_zero()):
                return v

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"kind": "Q"}
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Fq", "p": self.p, "f": list(self.f)}

    @classmethod
    def from_json(cls, obj, path: str = "$") -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SchemaError("field spec must be an object with 'kind'", path)
        kind = obj["kind"]
        if kind == "Q":
            return cls("Q")
        p = obj.get("p")
        if not isinstance(p, int):
            raise SchemaError("missing integer 'p'", path + ".p")
        if kind == "Fp":
            return cls("Fp", p)
        if kind == "Fq":
            f = obj.get("f")
            if not isinstance(f, list) or not all(isinstance(c, int) for c in f):
                raise SchemaError("'f' must be a list of integers", path + ".f")
            return cls("Fq", p, tuple(c % p for c in f))
        raise SchemaError(f"unknown field kind {kind!r}", path + ".kind")

    def __str__(self) -> str:
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"F_{self.p}"
        return f"F_{self.p}[x]/({poly.format_poly(self.f)})"


QQ = FieldSpec("Q")


def rationals() -> FieldSpec:
    return QQ


def finite_prime(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


def finite_ext(p: int, f) -> FieldSpec:
    return FieldSpec("Fq", p, poly.trim(f, p))


Value = Union[Fraction, int, tuple]


@dataclass(frozen=True)
class FieldScalar:
    """An immutable field element in canonical form.

    Build values through :meth:`make` (or by calling a :class:`FieldSpec`), which
    canonicalizes: reduced fractions, residues in ``[0, p)``, polynomials of
    degree below ``deg f``.
    """

    spec: FieldSpec
    value: Value

    @classmethod
    def make(cls, spec: FieldSpec, value) -> "FieldScalar":
        return cls(spec, canonicalize(spec, value))

    def is_zero(self) -> bool:
        return not self.value

    def is_one(self) -> bool:
        return self == self.spec.one()

    def _check(self, other: "FieldScalar") -> None:
        if self.spec != other.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")

    def _coerce(self, other) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return FieldScalar.make(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, neg(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, neg(self))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, inv(other))

    def __pow__(self, e: int):
        if e < 0:
            return inv(self) ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = mul(result, base)
            base = mul(base, base)
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return format_scalar(self)


def canonicalize(spec: FieldSpec, value) -> Value:
    if spec.kind == "Q":
        if isinstance(value, tuple):
            raise SpecMismatch("polynomial value for a rational field")
        return Fraction(value)
    p = spec.p
    if spec.kind == "Fp":
        if isinstance(value, tuple):
            value = value[0] if value else 0
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise DivisionByZero(f"denominator divisible by {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p
    if isinstance(value, Fraction):
        if value.denominator % p == 0:
            raise DivisionByZero(f"denominator divisible by {p}")
        value = value.numerator * pow(value.denominator, -1, p)
    if isinstance(value, int):
        value = (value,)
    return poly.mod(poly.trim(value, p), spec.f, p)


def add(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    a._check(b)
    s = a.spec
    if s.kind == "Q":
        return FieldScalar(s, a.value + b.value)
    if s.kind == "Fp":
        return FieldScalar(s, (a.value + b.value) % s.p)
    return FieldScalar(s, poly.add(a.value, b.value, s.p))


def neg(a: FieldScalar) -> FieldScalar:
    s = a.spec
    if s.kind == "Q":
        return FieldScalar(s, -a.value)
    if s.kind == "Fp":
        return FieldScalar(s, -a.value % s.p)
    return FieldScalar(s, poly.neg(a.value, s.p))


def mul(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    a._check(b)
    s = a.spec
    if s.kind == "Q":
        return FieldScalar(s, a.value * b.value)
    if s.kind == "Fp":
        return FieldScalar(s, a.value * b.value % s.p)
    return FieldScalar(s, poly.mod(poly.mul(a.value, b.value, s.p), s.f, s.p))


def inv(a: FieldScalar) -> FieldScalar:
    if a.is_zero():
        raise DivisionByZero("inverse of zero")
    s = a.spec
    if s.kind == "Q":
        return FieldScalar(s, 1 / a.value)
    if s.kind == "Fp":
        return FieldScalar(s, pow(a.value, -1, s.p))
    g, u, _ = poly.ext_gcd(a.value, s.f, s.p)
    assert g == (1,), "modulus is irreducible"
    return FieldScalar(s, poly.mod(u, s.f, s.p))


def format_scalar(a: FieldScalar) -> str:
    if a.spec.kind == "Q":
        v = a.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if a.spec.kind == "Fp":
        return str(a.value)
    return "[" + ",".join(str(c) for c in a.value) + "]"


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_scalar(spec: FieldSpec, text, path: str = "$") -> FieldScalar:
    """Parse ``"a/b"`` (or an int) for Q and ``"[c0,c1,...]"`` (or an int) for finite fields."""
    if isinstance(text, bool):
        raise SchemaError("boolean is not a scalar", path)
    if isinstance(text, int):
        return FieldScalar.make(spec, text)
    if isinstance(text, list):
        if spec.kind == "Q" or not all(isinstance(c, int) for c in text):
            raise SchemaError("coefficient list only valid over a finite field", path)
        return FieldScalar.make(spec, tuple(text))
    if not isinstance(text, str):
        raise SchemaError(f"cannot parse scalar from {type(text).__name__}", path)
    s = text.strip()
    if s.startswith("["):
        if spec.kind == "Q":
            raise SchemaError("coefficient list only valid over a finite field", path)
        body = s.strip("[] ")
        try:
            coeffs = tuple(int(c) for c in body.split(",")) if body else ()
        except ValueError:
            raise SchemaError(f"bad coefficient list {text!r}", path) from None
        return FieldScalar.make(spec, coeffs)
    m = _RATIONAL.match(s)
    if not m:
        raise SchemaError(f"bad scalar {text!r}", path)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise SchemaError("zero denominator", path)
    return FieldScalar.make(spec, Fraction(num, den))
