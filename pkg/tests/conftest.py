from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tatekit.basefield import QQ, finite_ext, finite_prime
from tatekit.series import polynomial

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

F5 = finite_prime(5)
F25 = finite_ext(5, (3, 0, 1))  # x^2 + 3 = x^2 - 2 over F_5
SPECS = [QQ, F5, F25]


@pytest.fixture
def f25():
    return F25


def scalars(spec, nonzero=False):
    if spec.kind == "Q":
        base = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
    elif spec.kind == "Fp":
        base = st.integers(0, spec.p - 1)
    else:
        base = st.tuples(*[st.integers(0, spec.p - 1)] * spec.degree)
    vals = base.map(spec)
    return vals.filter(bool) if nonzero else vals


@st.composite
def laurent_polys(draw, spec=QQ, n=2, lo=-2, hi=3, max_terms=5, nonzero=False):
    """Exact Laurent polynomials with exponents in a small box."""
    exps = draw(st.lists(st.tuples(*[st.integers(lo, hi)] * n), min_size=1 if nonzero else 0, max_size=max_terms, unique=True))
    coeffs = {e: draw(scalars(spec, nonzero=True)) for e in exps}
    return polynomial(spec, n, coeffs)


@st.composite
def windowed_polys(draw, spec=QQ, n=2, lo=-2, hi=3, max_terms=5):
    """A Laurent polynomial together with a truncation of it to random cutoffs."""
    full = draw(laurent_polys(spec, n, lo, hi, max_terms))
    cut = tuple(draw(st.one_of(st.none(), st.integers(lo + 1, hi + 2))) for _ in range(n))
    return full, cut
