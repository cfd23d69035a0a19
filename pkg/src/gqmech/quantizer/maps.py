"""Quantization maps from phase functions to differential operators.

Units have hbar = 1. Prequantum operators act on functions over phase
space (sections of the trivial prequantum line bundle); Schrodinger
operators act on half-densities over configuration space ``(t, q)``.
"""

from __future__ import annotations

import enum

from ..poisson import (
    PhaseFunction,
    Space,
    bracket_t,
    bracket_v,
    is_vertical_affine,
    lift,
)
from ..symbolic import ComplexRational, Polynomial
from .operators import DiffOperator, VarSet

__all__ = [
    "QuantizationError",
    "QuantizationMap",
    "prequantize_t",
    "prequantize_v",
    "schrodinger_quantize",
    "quadratic_parts",
    "quantize_quadratic",
    "quantize",
    "dirac_defect",
    "heisenberg_derivative",
]

MINUS_I = ComplexRational(0, -1)
PLUS_I = ComplexRational(0, 1)
MINUS_HALF_I = ComplexRational(0, -1) / 2


class QuantizationError(ValueError):
    """The function lies outside the domain of the requested map."""


def _unit(i: int, nvars: int) -> tuple[int, ...]:
    e = [0] * nvars
    e[i] = 1
    return tuple(e)


def _prequantize(f: Polynomial, lambdas: list[int], varset: VarSet) -> DiffOperator:
    # f^ = -i X_f + (f - p_l df/dp_l), with X_f = df/dp_l d_l - df/dq_l d^l
    m = f.dim
    nvars = 2 * m + 2
    terms: dict[tuple[int, ...], Polynomial] = {}
    potential = f
    for lam in lambdas:
        q_slot, p_slot = lam, m + 1 + lam
        dpf = f.diff(p_slot)
        dqf = f.diff(q_slot)
        if dpf:
            terms[_unit(q_slot, nvars)] = dpf.scale(MINUS_I)
            potential = potential - Polynomial.variable(p_slot, m) * dpf
        if dqf:
            terms[_unit(p_slot, nvars)] = dqf.scale(PLUS_I)
    terms[(0,) * nvars] = potential
    return DiffOperator(terms, varset, m)


def prequantize_t(f: PhaseFunction) -> DiffOperator:
    """Kostant-Souriau operator of ``f`` on T*Q."""
    f = lift(f)
    return _prequantize(f.poly, list(range(f.dim + 1)), VarSet.PHASE_T)


def prequantize_v(f: PhaseFunction) -> DiffOperator:
    """Prequantum operator of ``f`` for the Poisson structure of V*Q."""
    if f.space is not Space.VQ:
        raise QuantizationError("prequantize_v needs a function on V*Q")
    return _prequantize(f.poly, list(range(1, f.dim + 1)), VarSet.PHASE_V)


def schrodinger_quantize(f: PhaseFunction) -> DiffOperator:
    """Half-density operator ``-i a^l d_l - (i/2) d_l(a^l) + b`` of ``f = a^l p_l + b``.

    On V*Q the index runs over the fibre directions; on T*Q it includes
    the time direction (``a^0 p0`` quantizes to ``-i a^0 d_t``).
    """
    m = f.dim
    if f.space is Space.VQ:
        if not is_vertical_affine(f):
            raise QuantizationError(
                f"not affine in momenta (use quantize_quadratic): {f.poly}"
            )
        lambdas = list(range(1, m + 1))
    else:
        if f.poly.momentum_degree(include_p0=True) > 1:
            raise QuantizationError(f"not affine in momenta: {f.poly}")
        lambdas = list(range(0, m + 1))
    momenta = [m + 1 + lam for lam in lambdas]
    parts = f.poly.collect(momenta)
    nvars = 2 * m + 2
    zero_key = (0,) * len(momenta)
    b = parts.get(zero_key, Polynomial.zero(m))
    terms: dict[tuple[int, ...], Polynomial] = {}
    for j, lam in enumerate(lambdas):
        key = tuple(1 if i == j else 0 for i in range(len(momenta)))
        a = parts.get(key)
        if not a:
            continue
        terms[_unit(lam, nvars)] = a.scale(MINUS_I)
        b = b + a.diff(lam).scale(MINUS_HALF_I)
    terms[(0,) * nvars] = b
    return DiffOperator(terms, VarSet.CONFIG, m)


def quadratic_parts(H: PhaseFunction):
    """Split ``H = a^{jk} p_j p_k + b^k p_k + c`` with ``a`` symmetric.

    Returns ``(a, b, c)``: an ``m x m`` tuple-of-tuples, an ``m``-tuple and a
    polynomial, all functions of ``(t, q)`` only.
    """
    if H.space is not Space.VQ:
        raise QuantizationError("quadratic Hamiltonians must live on V*Q")
    m = H.dim
    if H.poly.momentum_degree(include_p0=False) > 2:
        raise QuantizationError(f"momentum degree exceeds 2: {H.poly}")
    momenta = [m + 1 + k for k in range(1, m + 1)]
    parts = H.poly.collect(momenta)
    zero = Polynomial.zero(m)
    a = [[zero] * m for _ in range(m)]
    b = [zero] * m
    c = zero
    for key, coeff in parts.items():
        deg = sum(key)
        nz = [j for j, e in enumerate(key) if e]
        if deg == 0:
            c = coeff
        elif deg == 1:
            b[nz[0]] = coeff
        elif len(nz) == 1:
            a[nz[0]][nz[0]] = coeff
        else:
            j, k = nz
            half = coeff.scale(ComplexRational(1, 0) / 2)
            a[j][k] = half
            a[k][j] = half
    return tuple(tuple(row) for row in a), tuple(b), c


def quantize_quadratic(H: PhaseFunction) -> DiffOperator:
    """Divergence-form quantization of a Hamiltonian of momentum degree <= 2.

    ``H^ = -d_j o a^{jk} o d_k - (i/2)(b^k d_k + d_k o b^k) + c``.
    """
    a, b, c = quadratic_parts(H)
    m = H.dim
    cfg = VarSet.CONFIG
    d = [DiffOperator.derivative(k, cfg, m) for k in range(1, m + 1)]
    out = DiffOperator.multiplication(c, cfg)
    for j in range(m):
        for k in range(m):
            if a[j][k]:
                out = out - d[j] @ DiffOperator.multiplication(a[j][k], cfg) @ d[k]
        if b[j]:
            bj = DiffOperator.multiplication(b[j], cfg)
            out = out + (bj @ d[j] + d[j] @ bj).scale(MINUS_HALF_I)
    return out


def quantize(f: PhaseFunction) -> DiffOperator:
    """Schrodinger operator of ``f``: affine functions directly, quadratic ones in divergence form."""
    if f.space is Space.TQ or f.poly.momentum_degree() <= 1:
        return schrodinger_quantize(f)
    return quantize_quadratic(f)


class QuantizationMap(enum.Enum):
    PREQUANT_T = "prequant_T"
    PREQUANT_V = "prequant_V"
    SCHRODINGER = "schrodinger"

    def quantize(self, f: PhaseFunction) -> DiffOperator:
        if self is QuantizationMap.PREQUANT_T:
            return prequantize_t(f)
        if self is QuantizationMap.PREQUANT_V:
            return prequantize_v(f)
        return quantize(f)

    def bracket(self, f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
        if self is QuantizationMap.PREQUANT_T:
            return bracket_t(f, g)
        if self is QuantizationMap.PREQUANT_V:
            return bracket_v(f, g)
        if f.space is Space.TQ or g.space is Space.TQ:
            return bracket_t(f, g)
        return bracket_v(f, g)


def dirac_defect(f: PhaseFunction, g: PhaseFunction, qmap: QuantizationMap) -> DiffOperator:
    """``[f^, g^] + i {f, g}^``; the zero operator when the Dirac condition holds."""
    lhs = qmap.quantize(f).commutator(qmap.quantize(g))
    return lhs + qmap.quantize(qmap.bracket(f, g)).scale(PLUS_I)


def heisenberg_derivative(fhat: DiffOperator, H: PhaseFunction) -> DiffOperator:
    """``i [H*^, f^]`` with ``H*^ = -i d_t + H^``: the time derivative of an observable."""
    if fhat.varset is not VarSet.CONFIG:
        raise QuantizationError("observable must act on configuration space")
    if H.space is not Space.VQ or H.poly.momentum_degree() > 2:
        raise QuantizationError(f"Hamiltonian is not quantizable: {H.poly}")
    m = H.dim
    hstar = DiffOperator.derivative("t", VarSet.CONFIG, m).scale(MINUS_I) + quantize(H)
    return hstar.commutator(fhat).scale(PLUS_I)
