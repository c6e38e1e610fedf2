from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F5, F25, laurent_polys
from tatekit import lattice as lat
from tatekit.basefield import QQ
from tatekit.errors import SchemaError
from tatekit.liftings import LiftingSpec, twisted
from tatekit.operators import random_operator
from tatekit.serialize import (
    dumps,
    parse,
    parse_series,
    program_from_json,
    program_to_json,
    serialize,
    series_from_json,
    series_to_json,
)
from tatekit.series import format_series, polynomial, s_inv, truncate


def test_three_term_series_round_trip():
    a = polynomial(QQ, 2, {(1, -2): -3, (0, 0): "1/2", (-1, 4): 1}, (5, None))
    assert parse("series", serialize("series", a)) == a
    assert parse_series(format_series(a), QQ, 2) == a


def test_two_level_lattice_round_trip():
    L = lat.from_rows(2, -1, [lat.standard(1, 2), lat.FULL, lat.ZERO])
    assert parse("lattice", serialize("lattice", L)) == L


def test_malformed_certificate_names_the_axis():
    obj = series_to_json(polynomial(QQ, 2, {(0, 0): 1}, (3, None)))
    obj["cert"]["lo"] = [4, 0]
    obj["cert"]["hi"] = [3, None]
    with pytest.raises(SchemaError) as exc:
        series_from_json(obj)
    assert "axis 1" in str(exc.value) and exc.value.path.startswith("$.cert")


@pytest.mark.parametrize(
    "obj,where",
    [
        ({"n": 1, "terms": []}, "$"),
        ({"field": {"kind": "Q"}, "n": 1, "terms": [[[0, 1], "1"]]}, "$.terms[0]"),
        ({"field": {"kind": "Q"}, "n": 1, "terms": [[[0], "x"]]}, "$.terms[0][1]"),
        ({"field": {"kind": "Q"}, "n": "two"}, "$.n"),
    ],
)
def test_schema_errors_carry_paths(obj, where):
    with pytest.raises(SchemaError) as exc:
        series_from_json(obj)
    assert exc.value.path == where


def test_operator_schema_errors():
    with pytest.raises(SchemaError) as exc:
        program_from_json({"field": {"kind": "Q"}, "n": 2, "op": {"op": "sum", "terms": [{"op": "proj", "axis": 3}]}})
    assert exc.value.path == "$.op.terms[0].axis"
    with pytest.raises(SchemaError):
        parse("operator", "{not json")


@given(a=laurent_polys(F25, n=2), cut=st.tuples(st.one_of(st.none(), st.integers(-1, 4)), st.one_of(st.none(), st.integers(-1, 4))))
def test_series_round_trips(a, cut):
    b = truncate(a, cut)
    text = serialize("series", b)
    assert parse("series", text) == b
    assert serialize("series", parse("series", text)) == text
    # The text form keeps coefficients and cutoffs but not lower-bound certificates.
    back = parse_series(format_series(b), F25, 2)
    assert back.terms == b.terms and back.cert.hi == b.cert.hi


@given(seed=st.integers(0, 10**6))
def test_inverse_certificates_round_trip(seed):
    # Sloped and exceptional certificates come out of s_inv.
    rng = random.Random(seed)
    a = polynomial(QQ, 2, {(0, 0): 1, (rng.randint(-2, 2), 1): rng.randint(1, 3), (1, rng.randint(0, 1)): 1})
    try:
        b = s_inv(a, (3, 3))
    except Exception:
        return
    assert parse("series", serialize("series", b)) == b


@given(seed=st.integers(0, 10**6))
def test_operator_round_trips(seed):
    rng = random.Random(seed)
    spec = rng.choice([QQ, F5])
    n = rng.choice([1, 2, 3])
    f = random_operator(rng, spec, n)
    text = serialize("operator", (f, spec, n))
    assert parse("operator", text) == (f, spec, n)
    assert dumps(program_to_json(*parse("operator", text))) == text


def test_lifting_and_field_round_trip():
    for spec in (LiftingSpec(), twisted("zero", 4)):
        assert parse("lifting", serialize("lifting", spec)) == spec
    for fs in (QQ, F5, F25):
        assert parse("field", serialize("field", fs)) == fs
