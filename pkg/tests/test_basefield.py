from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F5, F25, SPECS, scalars
from tatekit.basefield import QQ, FieldSpec, canonicalize, finite_ext, inv, parse_scalar
from tatekit.errors import DivisionByZero, NotIrreducible, SchemaError, SpecMismatch


def test_rational_sum():
    assert QQ(Fraction(1, 2)) + QQ(Fraction(1, 3)) == QQ(Fraction(5, 6))


def test_extension_sum_and_product():
    x = F25.generator()
    assert x + F25((2, 4)) == F25(2)
    assert x * x == F25(2)


def test_extension_inverse_by_reduction():
    x = F25.generator()
    # 2x * 4x = 8x^2 = 16 = 1 mod (5, x^2 - 2)
    assert (F25(2) * x) * (F25(4) * x) == F25.one()
    assert inv(F25(2) * x) == F25(4) * x


def test_trivial_inverses():
    assert inv(QQ(1)) == QQ(1)
    assert inv(QQ(Fraction(-3, 7))) == QQ(Fraction(-7, 3))
    assert QQ(Fraction(2, 3)) * QQ(Fraction(3, 2)) == QQ.one()


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZero):
        inv(F5.zero())
    with pytest.raises(ZeroDivisionError):
        QQ.one() / QQ.zero()


def test_spec_mismatch():
    with pytest.raises(SpecMismatch):
        QQ(1) + F5(1)


def test_reducible_modulus_rejected():
    with pytest.raises(NotIrreducible):
        finite_ext(5, (1, 0, 1))  # x^2 + 1 = (x - 2)(x + 2) mod 5


@pytest.mark.parametrize("bad", [{"kind": "Fp", "p": 6}, {"kind": "Fp"}, {"kind": "Z"}, {"kind": "Fq", "p": 5, "f": [3, 0, 2]}])
def test_bad_specs(bad):
    with pytest.raises(SchemaError):
        FieldSpec.from_json(bad)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_json_round_trip(spec):
    assert FieldSpec.from_json(spec.to_json()) == spec


def test_text_forms():
    assert str(QQ(Fraction(-7, 3))) == "-7/3"
    assert str(F25((2, 4))) == "[2,4]"
    assert parse_scalar(F25, "[2,4]") == F25((2, 4))
    assert parse_scalar(QQ, "-7/3") == QQ(Fraction(-7, 3))
    with pytest.raises(SchemaError):
        parse_scalar(QQ, "[1,2]")


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_field_axioms(spec, data):
    a, b, c = (data.draw(scalars(spec)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a + spec.zero() == a and a * spec.one() == a
    assert a - a == spec.zero()
    if a:
        assert a * inv(a) == spec.one()


@given(data=st.data())
def test_frobenius_is_additive(data):
    a, b = data.draw(scalars(F25)), data.draw(scalars(F25))
    assert (a + b) ** 5 == a**5 + b**5


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(v=st.integers(-50, 50))
def test_canonicalize_idempotent(spec, v):
    once = canonicalize(spec, v)
    assert canonicalize(spec, once) == once
