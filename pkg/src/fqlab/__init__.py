"""Exact incidence-geometry experiments over odd-order finite fields."""

from fqlab.ffield import FieldCtx, FieldElem, make_field, minus_one_is_square, nonzero_squares
from fqlab.report import ClaimReport

__all__ = [
    "ClaimReport",
    "FieldCtx",
    "FieldElem",
    "make_field",
    "minus_one_is_square",
    "nonzero_squares",
]
