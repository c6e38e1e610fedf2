"""Monomially spanned subspaces of V(n) = k((t1))...((tn)) and their lattice calculus.

A subspace is described row by row along the outermost exponent ``a_n``:

* rows ``a_n < m`` are all ``below`` (``ZERO`` or ``FULL``);
* rows ``m <= a_n < m + len(slices)`` are given explicitly;
* rows past the window follow ``above``: ``ZERO``, ``FULL`` or, for n = 2,
  a :class:`Ray` ``{a_1 >= base + slope * a_2}``.

A slice is ``FULL``, ``ZERO`` or a subspace of arity ``n - 1`` (for n = 1 a
slice is just ``FULL`` or ``ZERO``: the integer is in the set or not).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ArityMismatch, NotContained, PreconditionViolated, SchemaError

FULL = "FULL"
ZERO = "ZERO"
SYMBOLS = (FULL, ZERO)


@dataclass(frozen=True)
class Ray:
    """Row ``a_2`` of the tail is ``{a_1 >= base + slope * a_2}`` (n = 2 only)."""

    base: int
    slope: int

    def at(self, row: int) -> "MonomialSubspace":
        return standard(1, self.base + self.slope * row)


Slice = Union[str, "MonomialSubspace"]
Tail = Union[str, Ray]


@dataclass(frozen=True)
class MonomialSubspace:
    n: int
    m: int
    slices: tuple
    below: str = ZERO
    above: Tail = FULL

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(self.slices))
        if self.n < 1:
            raise ArityMismatch("subspaces need arity >= 1")
        if self.below not in SYMBOLS:
            raise SchemaError(f"below must be FULL or ZERO, got {self.below!r}")
        if isinstance(self.above, Ray):
            if self.n != 2:
                raise SchemaError("sloped tails are only supported for n = 2")
        elif self.above not in SYMBOLS:
            raise SchemaError(f"above must be FULL, ZERO or a ray, got {self.above!r}")
        for s in self.slices:
            if isinstance(s, MonomialSubspace):
                if self.n == 1 or s.n != self.n - 1:
                    raise ArityMismatch(f"slice of arity {s.n} inside arity {self.n}")
            elif s not in SYMBOLS:
                raise SchemaError(f"bad slice {s!r}")

    @property
    def top(self) -> int:
        """First row past the explicit window."""
        return self.m + len(self.slices)

    def row(self, r: int) -> Slice:
        if r < self.m:
            return self.below
        if r < self.top:
            return self.slices[r - self.m]
        if isinstance(self.above, Ray):
            return self.above.at(r)
        return self.above

    def __contains__(self, e) -> bool:
        return member(self, tuple(e))

    def __str__(self) -> str:
        return describe(self)


def member(S: Slice, e: tuple) -> bool:
    if S == FULL:
        return True
    if S == ZERO:
        return False
    if len(e) != S.n:
        raise ArityMismatch(f"exponent of length {len(e)} for arity {S.n}")
    sl = S.row(e[-1])
    if S.n == 1:
        return sl == FULL
    return member(sl, e[:-1])


def standard(n: int, i: int) -> MonomialSubspace:
    """``t_n^i O_1``: every monomial with ``a_n >= i``."""
    return MonomialSubspace(n, i, (), ZERO, FULL)


def full(n: int) -> MonomialSubspace:
    return MonomialSubspace(n, 0, (), FULL, FULL)


def zero_space(n: int) -> MonomialSubspace:
    return MonomialSubspace(n, 0, (), ZERO, ZERO)


def diagonal(base: int = 0, slope: int = -1, start: int = 0) -> MonomialSubspace:
    """The n = 2 subspace ``{a_2 >= start, a_1 >= base + slope * a_2}``."""
    return MonomialSubspace(2, start, (), ZERO, Ray(base, slope))


def from_rows(n: int, m: int, rows: Iterable[Slice], below: str = ZERO, above: Tail = FULL) -> MonomialSubspace:
    return canonical(MonomialSubspace(n, m, tuple(rows), below, above))


def _as_space(s: Slice, n: int) -> MonomialSubspace:
    if s == FULL:
        return full(n)
    if s == ZERO:
        return zero_space(n)
    return s


def _collapse(S: MonomialSubspace) -> Slice:
    """Turn trivially full/zero subspaces into symbols."""
    if not S.slices and S.below == S.above and S.below in SYMBOLS:
        return S.below
    return S


def canonical(S: Slice) -> Slice:
    """Shrink the window until its boundary slices are non-trivial; collapse nested slices."""
    if S in SYMBOLS:
        return S
    rows = [_canon_slice(s) for s in S.slices]
    m = S.m
    while rows and rows[0] == S.below:
        rows.pop(0)
        m += 1
    while rows:
        r = m + len(rows) - 1
        tail = S.above.at(r) if isinstance(S.above, Ray) else S.above
        if rows[-1] != tail:
            break
        rows.pop()
    if not rows and S.below == S.above:
        m = 0
    return MonomialSubspace(S.n, m, tuple(rows), S.below, S.above)


def _canon_slice(s: Slice) -> Slice:
    if s in SYMBOLS:
        return s
    return _collapse(canonical(s))


# --- containment ---------------------------------------------------------------


def _tail_contains(a: Tail, b: Tail, start: int) -> bool:
    """Is row ``r`` of tail ``b`` inside row ``r`` of tail ``a`` for every ``r >= start``?"""
    if b == ZERO or a == FULL:
        return True
    if a == ZERO or b == FULL:
        return False
    # Both rays: need b.base + b.slope r >= a.base + a.slope r for all r >= start.
    return b.slope >= a.slope and b.base + b.slope * start >= a.base + a.slope * start


def slice_contains(a: Slice, b: Slice, n: int) -> bool:
    if b == ZERO or a == FULL:
        return True
    if n == 0 or (a in SYMBOLS and b in SYMBOLS):
        return a == b or b == ZERO
    return contains(_as_space(a, n), _as_space(b, n))


def contains(A: MonomialSubspace, B: MonomialSubspace) -> bool:
    """Is every monomial of ``B`` in ``A``?"""
    if A.n != B.n:
        raise ArityMismatch(f"arity {A.n} vs {B.n}")
    if B.below == FULL and A.below != FULL:
        return False
    lo = min(A.m, B.m)
    hi = max(A.top, B.top)
    for r in range(lo, hi):
        if not slice_contains(A.row(r), B.row(r), A.n - 1):
            return False
    return _tail_contains(A.above, B.above, hi)


def equal(A: MonomialSubspace, B: MonomialSubspace) -> bool:
    return contains(A, B) and contains(B, A)


# --- meet and join -------------------------------------------------------------


def _combine_symbols(a: str, b: str, op: str) -> str:
    if op == "meet":
        return FULL if a == FULL and b == FULL else ZERO
    return FULL if a == FULL or b == FULL else ZERO


def _combine_slices(a: Slice, b: Slice, n: int, op: str) -> Slice:
    if a in SYMBOLS and b in SYMBOLS:
        return _combine_symbols(a, b, op)
    if op == "meet":
        if a == FULL:
            return b
        if b == FULL:
            return a
        if a == ZERO or b == ZERO:
            return ZERO
    else:
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        if a == FULL or b == FULL:
            return FULL
    return _canon_slice(_combine(a, b, op))


def _tail_settles(a: Tail, b: Tail, start: int, op: str) -> tuple:
    """Combined tail and the first row from which it applies."""
    if a in SYMBOLS and b in SYMBOLS:
        return _combine_symbols(a, b, op), start
    if op == "meet":
        if a == FULL:
            return b, start
        if b == FULL:
            return a, start
        if ZERO in (a, b):
            return ZERO, start
    else:
        if a == ZERO:
            return b, start
        if b == ZERO:
            return a, start
        if FULL in (a, b):
            return FULL, start
    # Two rays: the bound max(...) for meet, min(...) for join, is eventually one ray.
    if a.slope == b.slope:
        base = max(a.base, b.base) if op == "meet" else min(a.base, b.base)
        return Ray(base, a.slope), start
    steep, flat = (a, b) if a.slope > b.slope else (b, a)
    winner = steep if op == "meet" else flat
    # steep bound >= flat bound once r >= (flat.base - steep.base) / (steep.slope - flat.slope)
    cross = math.ceil((flat.base - steep.base) / (steep.slope - flat.slope))
    return winner, max(start, cross)


def _combine(A: MonomialSubspace, B: MonomialSubspace, op: str) -> MonomialSubspace:
    if A.n != B.n:
        raise ArityMismatch(f"arity {A.n} vs {B.n}")
    lo = min(A.m, B.m)
    hi = max(A.top, B.top)
    tail, settle = _tail_settles(A.above, B.above, hi, op)
    rows = [_combine_slices(A.row(r), B.row(r), A.n - 1, op) for r in range(lo, settle)]
    below = _combine_symbols(A.below, B.below, op)
    return canonical(MonomialSubspace(A.n, lo, tuple(rows), below, tail))


def meet(A: MonomialSubspace, B: MonomialSubspace) -> MonomialSubspace:
    """Monomial intersection (greatest monomial subspace inside both)."""
    return _combine(A, B, "meet")


def join(A: MonomialSubspace, B: MonomialSubspace) -> MonomialSubspace:
    """Monomial span of the union (least monomial subspace containing both)."""
    return _combine(A, B, "join")


# --- lattice predicate ---------------------------------------------------------


def is_lattice(S: Slice, n: Optional[int] = None) -> tuple:
    """``(True, "")`` or ``(False, reason)`` for the recursive lattice predicate."""
    if S in SYMBOLS:
        return False, f"{S} is not a lattice"
    if S.below != ZERO:
        return False, "unbounded below"
    if S.above != FULL:
        return False, "no FULL tail"
    if S.n == 1:
        return True, ""
    for r in range(S.m, S.top):
        sl = S.slices[r - S.m]
        if sl in SYMBOLS:
            continue
        ok, why = is_lattice(sl)
        if not ok:
            return False, f"slice at a{S.n}={r}: {why}"
    return True, ""


def require_lattice(S: MonomialSubspace) -> None:
    ok, why = is_lattice(S)
    if not ok:
        raise PreconditionViolated(f"not a lattice: {why}")


def sandwich(L: MonomialSubspace) -> tuple:
    """``(m, M)`` with ``standard(M) <= L <= standard(m)``, ``m`` maximal and ``M`` minimal."""
    require_lattice(L)
    L = canonical(L)
    return L.m, L.top


@dataclass(frozen=True)
class SliceQuotient:
    row: int
    big: Slice
    small: Slice

    def __str__(self) -> str:
        return f"a_n={self.row}: {describe(self.big)} / {describe(self.small)}"


def quotient(big: MonomialSubspace, small: MonomialSubspace) -> list:
    """Rows where ``big`` and ``small`` differ, with both slices (FULL/ZERO collapsed)."""
    require_lattice(big)
    require_lattice(small)
    if not contains(big, small):
        raise NotContained("the second lattice is not contained in the first")
    out = []
    for r in range(min(big.m, small.m), max(big.top, small.top)):
        a, b = _canon_slice(big.row(r)), _canon_slice(small.row(r))
        if a in SYMBOLS or b in SYMBOLS:
            same = a == b
        else:
            same = equal(a, b)
        if not same:
            out.append(SliceQuotient(r, a, b))
    return out


# --- rendering and JSON --------------------------------------------------------


def describe(S: Slice) -> str:
    if S in SYMBOLS:
        return S
    if not S.slices and S.below == ZERO and S.above == FULL:
        return f"t{S.n}^{S.m} O"
    parts = [f"a{S.n}<{S.m}: {S.below}"]
    for i, s in enumerate(S.slices):
        parts.append(f"a{S.n}={S.m + i}: {describe(s)}")
    if isinstance(S.above, Ray):
        parts.append(f"a{S.n}>={S.top}: a1>={S.above.base}{S.above.slope:+d}*a2")
    else:
        parts.append(f"a{S.n}>={S.top}: {S.above}")
    return "{" + "; ".join(parts) + "}"


def to_json(S: Slice):
    if S in SYMBOLS:
        return S
    above = {"ray": {"base": S.above.base, "slope": S.above.slope}} if isinstance(S.above, Ray) else S.above
    return {"n": S.n, "m": S.m, "slices": [to_json(s) for s in S.slices], "below": S.below, "above": above}


def from_json(obj, path: str = "$", n: Optional[int] = None) -> Slice:
    if isinstance(obj, str):
        if obj not in SYMBOLS:
            raise SchemaError(f"unknown slice symbol {obj!r}", path)
        return obj
    if not isinstance(obj, dict):
        raise SchemaError("subspace must be an object or FULL/ZERO", path)
    arity = obj.get("n", n)
    if not isinstance(arity, int) or arity < 1:
        raise SchemaError("missing positive integer 'n'", path + ".n")
    if n is not None and arity != n:
        raise SchemaError(f"expected arity {n}, got {arity}", path + ".n")
    m = obj.get("m", 0)
    if not isinstance(m, int):
        raise SchemaError("'m' must be an integer", path + ".m")
    raw = obj.get("slices", [])
    if not isinstance(raw, list):
        raise SchemaError("'slices' must be a list", path + ".slices")
    if arity == 1:
        slices = []
        for i, s in enumerate(raw):
            if s not in SYMBOLS and not isinstance(s, bool):
                raise SchemaError("arity-1 slices are FULL/ZERO", path + f".slices[{i}]")
            slices.append(s if s in SYMBOLS else (FULL if s else ZERO))
    else:
        slices = [from_json(s, path + f".slices[{i}]", arity - 1) for i, s in enumerate(raw)]
    below = obj.get("below", ZERO)
    if below not in SYMBOLS:
        raise SchemaError("'below' must be FULL or ZERO", path + ".below")
    above = obj.get("above", FULL)
    if isinstance(above, dict):
        ray = above.get("ray")
        if not isinstance(ray, dict) or not isinstance(ray.get("base"), int) or not isinstance(ray.get("slope", 0), int):
            raise SchemaError("ray tail needs integer base and slope", path + ".above")
        if arity != 2:
            raise SchemaError("sloped tails are only supported for n = 2", path + ".above")
        above = Ray(ray["base"], ray.get("slope", 0))
    elif above not in SYMBOLS:
        raise SchemaError("'above' must be FULL, ZERO or a ray", path + ".above")
    return MonomialSubspace(arity, m, tuple(slices), below, above)


def members_in_box(S: Slice, box: Iterable[range]) -> set:
    """All exponents in the product of ``box`` ranges that belong to ``S``."""
    return {e for e in itertools.product(*box) if member(S, e)}
