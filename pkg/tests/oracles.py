"""Independent brute-force references used by the test suite."""

from __future__ import annotations

import itertools
from functools import lru_cache

from tatekit.lattice import FULL, ZERO, MonomialSubspace

# Monomial lattices of V(2) whose explicit rows lie in a2 in [0, W) and whose
# proper slices are subsets of a1 in [0, W) plus everything from a1 = W on.
W = 4
CODES = 2 + 2**W  # ZERO, FULL, then one code per subset of the window cells
BOX_A1 = range(-2, W + 2)
BOX_A2 = range(-1, W + 1)


def code_has(code: int, a1: int) -> bool:
    if code == 0:
        return False
    if code == 1:
        return True
    if a1 >= W:
        return True
    if a1 < 0:
        return False
    return bool((code - 2) >> a1 & 1)


def lattice_has(codes: tuple, e: tuple) -> bool:
    a1, a2 = e
    if a2 < 0:
        return False
    if a2 >= W:
        return True
    return code_has(codes[a2], a1)


def _bit(a1: int, a2: int) -> int:
    return 1 << ((a2 - BOX_A2.start) * len(BOX_A1) + (a1 - BOX_A1.start))


@lru_cache(maxsize=None)
def row_masks() -> tuple:
    out = []
    for a2 in range(W):
        out.append(tuple(sum(_bit(a1, a2) for a1 in BOX_A1 if code_has(c, a1)) for c in range(CODES)))
    return tuple(out)


@lru_cache(maxsize=None)
def fixed_mask() -> int:
    return sum(_bit(a1, a2) for a2 in BOX_A2 for a1 in BOX_A1 if a2 >= W)


@lru_cache(maxsize=None)
def all_masks() -> list:
    """Bitmask (on the box) of every lattice in the family."""
    rm = row_masks()
    base = fixed_mask()
    return [base | rm[0][c0] | rm[1][c1] | rm[2][c2] | rm[3][c3] for c0, c1, c2, c3 in itertools.product(range(CODES), repeat=W)]


@lru_cache(maxsize=None)
def mask_set() -> frozenset:
    return frozenset(all_masks())


def mask_of_codes(codes: tuple) -> int:
    rm = row_masks()
    m = fixed_mask()
    for r, c in enumerate(codes):
        m |= rm[r][c]
    return m


def mask_of(S) -> int:
    """Bitmask of any subspace, evaluated through its own membership test."""
    return sum(_bit(a1, a2) for a2 in BOX_A2 for a1 in BOX_A1 if (a1, a2) in S)


def subspace_of_codes(codes: tuple) -> MonomialSubspace:
    rows = []
    for c in codes:
        if c in (0, 1):
            rows.append(ZERO if c == 0 else FULL)
        else:
            bits = tuple(FULL if (c - 2) >> i & 1 else ZERO for i in range(W))
            rows.append(MonomialSubspace(1, 0, bits, ZERO, FULL))
    return MonomialSubspace(2, 0, tuple(rows), ZERO, FULL)


def greatest_below(mask: int) -> int:
    """Union of all family lattices inside ``mask``, checked to be one of them."""
    inside = [m for m in all_masks() if m & ~mask == 0]
    best = 0
    for m in inside:
        best |= m
    assert best in mask_set()
    return best


def least_above(mask: int) -> int:
    above = [m for m in all_masks() if mask & ~m == 0]
    best = -1
    for m in above:
        best &= m
    assert best in mask_set()
    return best
