from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import laurent_polys
from tatekit.basefield import QQ
from tatekit.errors import EmptyPrecision, NotInGeneratedModel, PreconditionViolated, SchemaError
from tatekit.liftings import (
    MORPHISM_PLAUSIBLE,
    NOT_A_TATE_MORPHISM,
    STANDARD,
    TWISTED,
    LiftingSpec,
    check_witness,
    falsify_tate,
    fixes_rational_subfield,
    lift,
    lift_truncated,
    slicewise_operator,
    twisted,
)
from tatekit.operators import transfer
from tatekit.series import polynomial, residue

STD = LiftingSpec()


def P(coeffs, hi=None):
    return polynomial(QQ, 1, coeffs, hi)


def coeffs(x):
    return dict(x.terms)


def test_standard_lift_example():
    assert coeffs(lift(STD, P({(0,): 1, (3,): 1}))) == {(0, 0): QQ(1), (3, 0): QQ(1)}


def test_twisted_generator_example():
    spec = twisted("neg-identity", 4)
    out = lift(spec, P({(2,): 1}))
    assert coeffs(out) == {(2, 0): QQ(1), (-2, 1): QQ(1)}
    assert out.cert.hi == (None, 2)
    out.check()


def test_twisted_lift_is_multiplicative_in_b0():
    spec = twisted("neg-identity", 2)
    # t1^5 is beyond the generators, so it is read as b_0^5 and stays fixed.
    assert coeffs(lift(spec, P({(5,): 3, (-1,): 1}))) == {(5, 0): QQ(3), (-1, 0): QQ(1)}


def test_zero_twist_still_perturbs():
    out = lift(twisted("zero", 3), P({(3,): 1}))
    assert coeffs(out) == {(3, 0): QQ(1), (0, 1): QQ(1)}


def test_lift_errors():
    no_b0 = LiftingSpec(TWISTED, ((2, 2),), ((2, -2),))
    with pytest.raises(NotInGeneratedModel):
        lift(no_b0, P({(3,): 1}))
    with pytest.raises(EmptyPrecision):
        lift(twisted("neg-identity", 2), P({(0,): 1}, hi=(4,)))
    with pytest.raises(SchemaError):
        LiftingSpec(TWISTED, ((0, 1), (1, 1)))
    with pytest.raises(SchemaError):
        LiftingSpec(STANDARD, ((0, 1),))
    with pytest.raises(SchemaError):
        LiftingSpec(TWISTED, ((0, 1),), ((3, 1),))


def test_falsifier_examples():
    v = falsify_tate(STD, 10)
    assert v.verdict == MORPHISM_PLAUSIBLE and v.lattice_m == 0
    v = falsify_tate(twisted("pos-identity", 10), 10)
    assert v.verdict == MORPHISM_PLAUSIBLE and v.lattice_m == 0
    spec = twisted("neg-identity", 10)
    v = falsify_tate(spec, 10)
    assert v.verdict == NOT_A_TATE_MORPHISM
    assert [w.m for w in v.witnesses] == list(range(11))
    # Index 1 would duplicate b_0, so the m = 0 witness is b_2.
    assert [w.index for w in v.witnesses] == [2] + [m + 1 for m in range(1, 11)]
    assert all(w.exponent == (-w.index, 1) for w in v.witnesses)
    assert all(check_witness(spec, w) for w in v.witnesses)


def test_zero_twist_is_plausible():
    assert falsify_tate(twisted("zero", 6), 6).verdict == MORPHISM_PLAUSIBLE


def test_fixes_rational_subfield_examples():
    samples = [P({(1,): 1}), P({(2,): 1}), P({(0,): 1, (1,): 1})]
    assert fixes_rational_subfield(twisted("neg-identity", 5), samples)
    assert fixes_rational_subfield(STD, samples)
    with pytest.raises(PreconditionViolated):
        fixes_rational_subfield(LiftingSpec(TWISTED, ((0, 1), (2, 2)), ((0, -1),)), samples)


def test_standard_slicewise_operator_is_bounded():
    t = transfer(slicewise_operator(STD), 2, QQ)
    for e in range(-5, 6):
        assert all(ax.lower_bound(e) is not None for ax in t.axes)
    with pytest.raises(PreconditionViolated):
        slicewise_operator(twisted("neg-identity", 3))


def test_json_round_trip():
    spec = twisted("neg-identity", 3)
    assert LiftingSpec.from_json(spec.to_json()) == spec
    with pytest.raises(SchemaError):
        LiftingSpec.from_json({"mode": "SIDEWAYS"})


@given(a=laurent_polys(QQ, n=1, lo=-4, hi=8), preset=st.sampled_from(["neg-identity", "pos-identity", "zero"]))
def test_section_property(a, preset):
    for spec in (STD, twisted(preset, 6)):
        out = lift(spec, a)
        out.check()
        assert coeffs(residue(out)) == coeffs(a)


@given(a=laurent_polys(QQ, n=1, lo=-4, hi=8))
def test_degenerate_twist_is_standard(a):
    gens = ((0, 1),) + tuple((i, i) for i in range(2, 8))
    bare = LiftingSpec(TWISTED, gens, ())
    assert coeffs(lift_truncated(bare, a)) == coeffs(lift_truncated(STD, a))


@given(r=st.integers(1, 12), extra=st.integers(0, 6))
def test_falsifier_monotone(r, extra):
    spec = twisted("neg-identity", r + extra)
    v, w = falsify_tate(spec, r), falsify_tate(spec, r + extra)
    assert v.verdict == NOT_A_TATE_MORPHISM and w.verdict == NOT_A_TATE_MORPHISM
    assert w.witnesses[: len(v.witnesses)] == v.witnesses


def test_fixes_rational_subfield_on_random_samples():
    rng = random.Random(7)
    samples = [P({(rng.randint(-3, 6),): rng.randint(1, 5) for _ in range(3)}) for _ in range(20)]
    assert fixes_rational_subfield(twisted("neg-identity", 6), samples)
