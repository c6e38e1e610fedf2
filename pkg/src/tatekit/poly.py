"""Dense polynomials over F_p.

A polynomial is a tuple of ints in ``[0, p)``, lowest degree first, with no
trailing zeros. The zero polynomial is ``()``.
"""

from __future__ import annotations

import re
from typing import Sequence

Poly = tuple


def trim(coeffs: Sequence[int], p: int) -> Poly:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def deg(a: Poly) -> int:
    return len(a) - 1


def add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def neg(a: Poly, p: int) -> Poly:
    return trim([-c for c in a], p)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([c * x for x in a], p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for j, y in enumerate(b):
            r[shift + j] = (r[shift + j] - c * y) % p
        while r and r[-1] == 0:
            r.pop()
    return trim(q, p), tuple(r)


def mod(a: Poly, b: Poly, p: int) -> Poly:
    return divmod_(a, b, p)[1]


def monic(a: Poly, p: int) -> Poly:
    if not a:
        return a
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def ext_gcd(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return (), s0, t0
    c = pow(r0[-1], -1, p)
    return scale(r0, c, p), scale(s0, c, p), scale(t0, c, p)


def powmod(a: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = (1,)
    base = mod(a, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return mod(result, m, p) if m and deg(m) > 0 else ()


def compose(f: Poly, a: Poly, p: int, m: Poly | None = None) -> Poly:
    """Evaluate ``f(a)`` (optionally reduced modulo ``m``) by Horner's rule."""
    acc: Poly = ()
    for c in reversed(f):
        acc = add(mul(acc, a, p), (c,), p)
        if m is not None:
            acc = mod(acc, m, p)
    return acc


def derivative(f: Poly, p: int) -> Poly:
    return trim([i * c for i, c in enumerate(f)][1:], p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_irreducible(f: Poly, p: int) -> bool:
    """Deterministic test: ``gcd(f, x^(p^i) - x) = 1`` for all ``i <= deg f / 2``."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x: Poly = (0, 1)
    xp = x
    for _ in range(1, n // 2 + 1):
        xp = powmod(xp, p, f, p)
        if deg(gcd(f, sub(xp, x, p), p)) > 0:
            return False
    return True


def format_poly(a: Poly, var: str = "x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(terms)


def parse_poly(text: str, p: int, var: str = "x") -> Poly:
    """Parse ``"x^2 - 2"`` (or ``"3x + 1"``, ``"2*x"``) or a coefficient list ``"3,0,1"`` (lowest first)."""
    s = text.replace(" ", "")
    if var not in s:
        try:
            return trim([int(c) for c in s.split(",")], p)
        except ValueError:
            raise ValueError(f"bad polynomial {text!r}") from None
    coeffs: dict = {}
    for tok in re.findall(r"[+-]?[^+-]+", s):
        m = re.fullmatch(rf"([+-]?)(\d*)\*?(?:({var})(?:\^(\d+))?)?", tok)
        if not m or (not m.group(2) and not m.group(3)):
            raise ValueError(f"bad polynomial term {tok!r} in {text!r}")
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            c = -c
        k = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        coeffs[k] = coeffs.get(k, 0) + c
    return trim([coeffs.get(i, 0) for i in range(max(coeffs) + 1)], p)
