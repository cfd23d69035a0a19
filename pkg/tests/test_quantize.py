import random

import pytest

from gqmech.poisson import PhaseFunction, Space, bracket_v, lift, on_tq, on_vq
from gqmech.quantizer import (
    DiffOperator,
    QuantizationError,
    QuantizationMap,
    VarSet,
    dirac_defect,
    heisenberg_derivative,
    prequantize_t,
    prequantize_v,
    quantize,
    quantize_quadratic,
    schrodinger_quantize,
)
from gqmech.symbolic import ComplexRational, Polynomial, poly_parse, random_polynomial, random_vertical_affine

I = ComplexRational(0, 1)
P = lambda text, dim=1: poly_parse(text, dim)  # noqa: E731


def op(varset, dim=1, **terms):
    """Operator from ``slot=coefficient`` pairs; slot names like ``q1`` or ``one``."""
    names = Polynomial.zero(dim).names
    out = {}
    for slot, coeff in terms.items():
        alpha = [0] * (2 * dim + 2)
        for part in slot.split("_"):
            if part != "one":
                alpha[names.index(part)] += 1
        out[tuple(alpha)] = P(coeff, dim) if isinstance(coeff, str) else coeff
    return DiffOperator(out, varset, dim)


T, V, C = VarSet.PHASE_T, VarSet.PHASE_V, VarSet.CONFIG


def test_prequantize_t_canonical_operators():
    assert prequantize_t(on_tq("p1")) == op(T, q1="-i")
    assert prequantize_t(on_tq("p0")) == op(T, t="-i")
    assert prequantize_t(on_tq("q1")) == op(T, p1="i", one="q1")
    assert prequantize_t(on_tq("t")) == op(T, p0="i", one="t")
    assert prequantize_t(on_tq("1")) == DiffOperator.identity(T, 1)


def test_prequantize_v_examples():
    assert prequantize_v(on_vq("p1")) == op(V, q1="-i")
    assert prequantize_v(on_vq("t^2 + 3*t")) == op(V, one="t^2 + 3*t")
    assert prequantize_v(on_vq("q1*p1")) == op(V, q1="-i*q1", p1="i*p1")
    with pytest.raises(QuantizationError):
        prequantize_v(on_tq("p0"))


def test_schrodinger_examples():
    assert schrodinger_quantize(on_vq("p1")) == op(C, q1="-i")
    assert schrodinger_quantize(on_vq("q1")) == op(C, one="q1")
    assert schrodinger_quantize(on_vq("q1*p1")) == op(C, q1="-i*q1", one="-1/2*i")
    with pytest.raises(QuantizationError):
        schrodinger_quantize(on_vq("p1^2"))


def test_schrodinger_on_tq_includes_time_direction():
    assert schrodinger_quantize(on_tq("p0 + q1")) == op(C, t="-i", one="q1")
    assert schrodinger_quantize(on_tq("t*p0")) == op(C, t="-i*t", one="-1/2*i")


def test_quadratic_examples():
    assert quantize_quadratic(on_vq("0.5*p1^2")) == op(C, q1_q1="-1/2")
    assert quantize_quadratic(on_vq("0.5*p1^2 + 0.5*q1^2")) == op(C, q1_q1="-1/2", one="1/2*q1^2")
    assert quantize_quadratic(on_vq("q1^2*p1^2")) == op(C, q1_q1="-q1^2", q1="-2*q1")
    with pytest.raises(QuantizationError):
        quantize_quadratic(on_vq("p1^3"))


def test_quadratic_mixed_term_is_split_symmetrically():
    H = quantize_quadratic(on_vq("p1*p2", 2))
    assert H == op(C, 2, q1_q2="-1")
    assert quantize(on_vq("p1*p2 + q1*p1", 2)).is_self_adjoint()


def test_dirac_defect_examples():
    assert dirac_defect(on_vq("p1"), on_vq("q1"), QuantizationMap.SCHRODINGER).is_zero()
    rng = random.Random(7)
    for _ in range(20):
        f = PhaseFunction(random_polynomial(rng, 1, 3, list(range(4))), Space.TQ)
        g = PhaseFunction(random_polynomial(rng, 1, 3, list(range(4))), Space.TQ)
        assert dirac_defect(f, g, QuantizationMap.PREQUANT_T).is_zero()


def test_dirac_defect_quadratic_regression():
    # frozen from the symbolic commutator; divergence form makes this pair exact
    defect = dirac_defect(on_vq("q1^2*p1^2"), on_vq("q1^3"), QuantizationMap.SCHRODINGER)
    assert defect == DiffOperator.zero(C, 1)


def test_dirac_defect_quadratic_pair_is_not_exact():
    # two quadratics: the bracket is cubic in momenta and cannot be routed
    with pytest.raises(QuantizationError):
        dirac_defect(on_vq("q1^2*p1^2"), on_vq("p1^2"), QuantizationMap.SCHRODINGER)


def test_heisenberg_examples():
    H = on_vq("0.5*p1^2")
    assert heisenberg_derivative(quantize(on_vq("q1")), H) == op(C, q1="-i")
    assert heisenberg_derivative(DiffOperator.identity(C, 1), on_vq("q1^4*p1^2 + t")).is_zero()
    assert heisenberg_derivative(quantize(on_vq("t")), H) == DiffOperator.identity(C, 1)
    with pytest.raises(QuantizationError):
        heisenberg_derivative(quantize(on_vq("q1")), on_vq("p1^3"))


def test_heisenberg_matches_hamilton_equations_for_polynomial_potentials():
    rng = random.Random(11)
    for _ in range(25):
        V = random_polynomial(rng, 1, 5, ["t", "q1"])
        H = on_vq(P("0.5*p1^2") + V)
        assert heisenberg_derivative(quantize(on_vq("q1")), H) == quantize(on_vq("p1"))
        assert heisenberg_derivative(quantize(on_vq("p1")), H) == quantize(PhaseFunction(-V.diff("q1")))


def test_restriction_of_t_operator_is_v_operator():
    rng = random.Random(3)
    for _ in range(50):
        f = PhaseFunction(random_polynomial(rng, 2, 3, complex_coeffs=True))
        assert prequantize_t(lift(f)).restrict_to_pullback_sections() == prequantize_v(f)


def test_schrodinger_operators_of_real_affine_functions_are_symmetric():
    rng = random.Random(5)
    for i in range(50):
        f = PhaseFunction(random_vertical_affine(rng, 1 + i % 2, 3))
        assert schrodinger_quantize(f).is_self_adjoint()


def test_bracket_closure_of_affine_functions():
    f, g = on_vq("q1^2*p1 + t"), on_vq("q1*p1 + q1^3")
    assert bracket_v(f, g).poly.momentum_degree() <= 1
    assert dirac_defect(f, g, QuantizationMap.SCHRODINGER).is_zero()


def test_prequantization_is_complex_linear():
    f = on_vq("q1*p1 + t*q1^2")
    assert prequantize_v(on_vq(f.poly.scale(I))) == prequantize_v(f).scale(I)
