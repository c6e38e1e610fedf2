"""Exact iterated Laurent series, monomial Tate lattices and cubical operator algebras."""

from __future__ import annotations

from .basefield import FieldScalar, FieldSpec, finite_ext, finite_prime, rationals
from .errors import TatekitError
from .lattice import MonomialSubspace, contains, join, meet, quotient, sandwich, standard
from .liftings import LiftingSpec, falsify_tate, lift, twisted
from .operators import classify_tate, classify_yekutieli, decompose, normal_form, transfer
from .series import TruncatedSeries, lex_valuation, monomial, polynomial, s_add, s_inv, s_mul, series

__all__ = [
    "FieldScalar",
    "FieldSpec",
    "LiftingSpec",
    "MonomialSubspace",
    "TatekitError",
    "TruncatedSeries",
    "classify_tate",
    "classify_yekutieli",
    "contains",
    "decompose",
    "falsify_tate",
    "finite_ext",
    "finite_prime",
    "join",
    "lex_valuation",
    "lift",
    "meet",
    "monomial",
    "normal_form",
    "polynomial",
    "quotient",
    "rationals",
    "s_add",
    "s_inv",
    "s_mul",
    "sandwich",
    "series",
    "standard",
    "transfer",
    "twisted",
]
