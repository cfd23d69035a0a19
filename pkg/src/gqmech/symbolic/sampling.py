"""Seeded random polynomials for property checks."""

from __future__ import annotations

import random
from collections.abc import Sequence
from fractions import Fraction

from .polynomial import Polynomial, VarId, variable_index
from .rational import ComplexRational

__all__ = ["random_coefficient", "random_polynomial", "random_vertical_affine"]


def random_coefficient(rng: random.Random, complex_coeffs: bool = False) -> ComplexRational:
    """Small nonzero rational (optionally Gaussian-rational) coefficient."""
    re = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
    im = Fraction(0)
    if complex_coeffs and rng.random() < 0.5:
        im = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return ComplexRational(re, im)


def random_polynomial(
    rng: random.Random,
    dim: int,
    degree: int,
    variables: Sequence[VarId] | None = None,
    max_terms: int = 5,
    complex_coeffs: bool = False,
) -> Polynomial:
    """Random polynomial of total degree at most ``degree``.

    Only ``variables`` (default: all except ``p0``) appear. The number of
    terms is drawn uniformly from ``1..max_terms``; merging can leave fewer.
    """
    nvars = 2 * dim + 2
    if variables is None:
        allowed = [i for i in range(nvars) if i != dim + 1]
    else:
        allowed = [variable_index(v, dim) for v in variables]
    terms: dict[tuple[int, ...], ComplexRational] = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.choice(allowed)] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, ComplexRational(0)) + random_coefficient(rng, complex_coeffs)
    return Polynomial(terms, dim)


def random_vertical_affine(
    rng: random.Random,
    dim: int,
    degree: int,
    max_terms: int = 3,
    complex_coeffs: bool = False,
) -> Polynomial:
    """Random ``a^k(t, q) p_k + b(t, q)`` with every coefficient of degree <= ``degree``."""
    base = ["t"] + [f"q{k}" for k in range(1, dim + 1)]
    out = random_polynomial(rng, dim, degree, base, max_terms, complex_coeffs)
    for k in range(1, dim + 1):
        if rng.random() < 0.25:
            continue
        a = random_polynomial(rng, dim, degree, base, max_terms, complex_coeffs)
        out = out + a * Polynomial.variable(f"p{k}", dim)
    return out
