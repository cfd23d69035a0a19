"""Exact polynomial arithmetic over Q(i) and the expression parser."""

from .parser import ParseError, poly_parse
from .polynomial import (
    Polynomial,
    poly_arith,
    poly_diff,
    poly_eval,
    poly_substitute_affine,
    variable_index,
    variable_names,
)
from .rational import ComplexRational
from .sampling import random_polynomial, random_vertical_affine

__all__ = [
    "ComplexRational",
    "ParseError",
    "Polynomial",
    "poly_arith",
    "poly_diff",
    "poly_eval",
    "poly_parse",
    "poly_substitute_affine",
    "random_polynomial",
    "random_vertical_affine",
    "variable_index",
    "variable_names",
]
