from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from tatekit.errors import ArityMismatch, NotContained, PreconditionViolated, SchemaError
from tatekit.lattice import (
    FULL,
    ZERO,
    MonomialSubspace,
    canonical,
    contains,
    diagonal,
    from_json,
    from_rows,
    is_lattice,
    join,
    meet,
    members_in_box,
    quotient,
    sandwich,
    standard,
    to_json,
)

BOX = (range(-10, 10), range(-10, 10))


def box_members(S):
    return members_in_box(S, BOX)


codes = st.tuples(*[st.integers(0, oracles.CODES - 1)] * oracles.W)


@st.composite
def lattices(draw, n=2, depth_rows=3):
    """Random monomial lattices of arity n with small windows."""
    m = draw(st.integers(-3, 2))
    k = draw(st.integers(0, depth_rows))
    rows = []
    for _ in range(k):
        kind = draw(st.sampled_from(["Z", "F", "L"] if n > 1 else ["Z", "F"]))
        if kind == "Z":
            rows.append(ZERO)
        elif kind == "F":
            rows.append(FULL)
        else:
            rows.append(draw(lattices(n - 1, depth_rows)))
    return MonomialSubspace(n, m, tuple(rows), ZERO, FULL)


def test_standard_containments():
    assert contains(standard(2, 0), standard(2, 3))
    assert not contains(standard(2, 3), standard(2, 0))


def test_exceptional_slice_inside_standard():
    L = from_rows(2, -1, [standard(1, 2)])
    assert contains(standard(2, -1), L)
    assert box_members(L) <= box_members(standard(2, -1))
    assert not contains(standard(2, 0), L)


def test_meet_join_of_standards():
    assert canonical(meet(standard(2, 1), standard(2, 4))) == standard(2, 4)
    assert canonical(join(standard(2, 1), standard(2, 4))) == standard(2, 1)


def test_join_absorbs_into_outer_standard():
    L = from_rows(2, -2, [standard(1, 5), ZERO, standard(1, -1)])
    m, _ = sandwich(L)
    assert canonical(join(L, standard(2, m))) == standard(2, m)


def test_sandwich_examples():
    assert sandwich(standard(3, 4)) == (4, 4)
    L = from_rows(2, -2, [FULL, ZERO])
    assert sandwich(L) == (-2, 0)
    assert contains(L, standard(2, 0)) and contains(standard(2, -2), L)
    P = from_rows(2, -1, [standard(1, 0), standard(1, 2), standard(1, -3)])
    assert sandwich(P) == (-1, 2)


def test_quotient_examples():
    q = quotient(standard(2, 0), standard(2, 2))
    assert [(x.row, x.big, x.small) for x in q] == [(0, FULL, ZERO), (1, FULL, ZERO)]
    L = from_rows(2, 0, [standard(1, 3)])
    assert quotient(L, L) == []
    (x,) = quotient(standard(2, 0), L)
    assert (x.row, x.big, x.small) == (0, FULL, standard(1, 3))
    diff = box_members(standard(2, 0)) - box_members(L)
    assert diff == {(a1, 0) for a1 in range(-10, 3)}
    with pytest.raises(NotContained):
        quotient(standard(2, 2), standard(2, 0))


@pytest.mark.parametrize("i,j", [(0, 0), (-2, 3), (1, 5)])
def test_quotient_of_standards_has_full_rows(i, j):
    q = quotient(standard(2, i), standard(2, j))
    assert len(q) == j - i
    assert all(x.big == FULL and x.small == ZERO for x in q)


def test_is_lattice_reasons():
    assert is_lattice(standard(3, -1)) == (True, "")
    ok, why = is_lattice(diagonal(0, -1))
    assert not ok and why == "no FULL tail"
    ok, why = is_lattice(MonomialSubspace(2, 0, (), FULL, FULL))
    assert not ok and why == "unbounded below"
    ok, why = is_lattice(from_rows(2, 0, [MonomialSubspace(1, 0, (), FULL, FULL)]))
    assert ok  # a FULL slice collapses to the symbol
    ok, why = is_lattice(MonomialSubspace(2, 0, (MonomialSubspace(1, 0, (), FULL, ZERO),), ZERO, FULL))
    assert not ok and why.startswith("slice at a2=0")


def test_diagonal_membership_matches_rule():
    D = diagonal(0, -1)
    assert box_members(D) == {(a1, a2) for a1, a2 in itertools.product(*BOX) if a2 >= 0 and a1 >= -a2}
    # Diagonal sits in O1 but contains no t2^M O1.
    assert contains(standard(2, 0), D)
    assert all(not contains(D, standard(2, M)) for M in range(0, 8))


def test_meet_of_rays_settles():
    A, B = diagonal(0, -1), diagonal(-5, 0)
    M = meet(A, B)
    assert box_members(M) == box_members(A) & box_members(B)
    J = join(A, B)
    assert box_members(J) == box_members(A) | box_members(B)


def test_errors_and_json():
    with pytest.raises(ArityMismatch):
        contains(standard(1, 0), standard(2, 0))
    with pytest.raises(PreconditionViolated):
        sandwich(diagonal())
    with pytest.raises(SchemaError):
        from_json({"n": 1, "m": 0, "slices": [{"n": 1}]})
    with pytest.raises(SchemaError):
        from_json({"n": 3, "above": {"ray": {"base": 0, "slope": -1}}})
    L = from_rows(2, -1, [standard(1, 2), FULL, ZERO])
    assert from_json(to_json(L)) == L
    assert from_json(to_json(diagonal())) == diagonal()


@given(a=codes, b=codes)
def test_meet_join_are_extremal_by_enumeration(a, b):
    A, B = oracles.subspace_of_codes(a), oracles.subspace_of_codes(b)
    ma, mb = oracles.mask_of_codes(a), oracles.mask_of_codes(b)
    assert oracles.mask_of(A) == ma
    assert oracles.mask_of(meet(A, B)) == oracles.greatest_below(ma & mb)
    assert oracles.mask_of(join(A, B)) == oracles.least_above(ma | mb)


@given(a=lattices(), b=lattices(), c=lattices())
def test_poset_laws(a, b, c):
    assert contains(a, a)
    if contains(a, b) and contains(b, a):
        assert canonical(a) == canonical(b)
    if contains(a, b) and contains(b, c):
        assert contains(a, c)
    assert contains(a, b) == (box_members(b) <= box_members(a))


@given(a=lattices(), b=lattices())
def test_meet_join_bounds(a, b):
    m, j = meet(a, b), join(a, b)
    assert contains(a, m) and contains(b, m)
    assert contains(j, a) and contains(j, b)
    assert is_lattice(m)[0] and is_lattice(j)[0]
    assert box_members(m) == box_members(a) & box_members(b)
    assert box_members(j) == box_members(a) | box_members(b)


@given(L=st.one_of(lattices(n=1), lattices(n=2), lattices(n=3, depth_rows=2)))
def test_sandwich_bounds(L):
    m, M = sandwich(L)
    assert contains(standard(L.n, m), L)
    assert contains(L, standard(L.n, M))
    assert not contains(standard(L.n, m + 1), L)
    assert not contains(L, standard(L.n, M - 1))


@given(L=lattices(n=3, depth_rows=2))
def test_json_round_trip(L):
    assert from_json(to_json(L)) == L
    assert canonical(canonical(L)) == canonical(L)
