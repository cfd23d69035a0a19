import random

import pytest
from hypothesis import given, settings
from strategies import polynomials

from gqmech.poisson import (
    FrameConnection,
    PhaseFunction,
    Space,
    VectorFieldCoeffs,
    bracket_t,
    bracket_v,
    canonical_lift,
    classical_evolution,
    evolution_identity_defect,
    frame_hamiltonian,
    frame_split,
    hamiltonian_connection,
    hamiltonian_vector_field_t,
    is_vertical_affine,
    lift,
    on_tq,
    on_vq,
    star_hamiltonian,
)
from gqmech.symbolic import Polynomial, poly_parse, random_polynomial

P = lambda text, dim=1: poly_parse(text, dim)  # noqa: E731
OSC = "0.5*p1^2 + 0.5*q1^2"


def field(d_t, d_q, d_p, d_p0=None, dim=1):
    conv = lambda x: P(x, dim) if isinstance(x, str) else x  # noqa: E731
    return VectorFieldCoeffs(
        conv(d_t), tuple(map(conv, d_q)), tuple(map(conv, d_p)), None if d_p0 is None else conv(d_p0)
    )


def test_vq_functions_reject_p0():
    with pytest.raises(ValueError):
        on_vq("p0 + q1")
    assert on_tq("p0 + q1").space is Space.TQ
    assert lift(on_vq("q1")).space is Space.TQ


@pytest.mark.parametrize(
    "f, g, expected",
    [("p1", "q1", "1"), ("t", "q1*p1", "0"), ("q1*p1", "p1", "-p1")],
)
def test_bracket_v_examples(f, g, expected):
    assert bracket_v(on_vq(f), on_vq(g)).poly == P(expected)


def test_bracket_v_space_mismatch():
    with pytest.raises(ValueError):
        bracket_v(on_tq("p0"), on_vq("q1"))


def test_bracket_t_examples():
    assert bracket_t(on_tq("p0"), on_tq("t")).poly == 1
    assert bracket_t(on_tq("p0 + 0.5*p1^2"), on_tq("q1")).poly == P("p1")


@given(polynomials(2), polynomials(2))
def test_bracket_t_restricts_to_bracket_v(f, g):
    F, G = PhaseFunction(f), PhaseFunction(g)
    assert bracket_t(F, G).poly == bracket_v(F, G).poly


@settings(max_examples=60)
@given(polynomials(1, max_terms=3, p0=True), polynomials(1, max_terms=3, p0=True), polynomials(1, max_terms=3, p0=True))
def test_bracket_t_is_a_lie_bracket(f, g, h):
    F, G, H = (PhaseFunction(x, Space.TQ) for x in (f, g, h))
    b = lambda x, y: bracket_t(x, y)  # noqa: E731
    assert b(F, G).poly == -b(G, F).poly
    jacobi = b(F, b(G, H)).poly + b(G, b(H, F)).poly + b(H, b(F, G)).poly
    assert jacobi.is_zero()
    # Leibniz rule in the second slot
    assert b(F, PhaseFunction(g * h, Space.TQ)).poly == b(F, G).poly * h + g * b(F, H).poly


def test_hamiltonian_vector_field_examples():
    assert hamiltonian_vector_field_t(on_tq("p1")) == field("0", ["1"], ["0"], "0")
    assert hamiltonian_vector_field_t(on_tq("q1")) == field("0", ["0"], ["-1"], "0")
    assert hamiltonian_vector_field_t(on_tq("p0 + " + OSC)) == field("1", ["p1"], ["-q1"], "0")


@given(polynomials(1, p0=True), polynomials(1, p0=True))
def test_vector_field_acts_as_bracket(f, g):
    F = PhaseFunction(f, Space.TQ)
    assert hamiltonian_vector_field_t(F).apply(g) == bracket_t(F, PhaseFunction(g, Space.TQ)).poly


def test_star_hamiltonian_examples():
    assert star_hamiltonian(on_vq("0")).poly == P("p0")
    assert star_hamiltonian(on_vq(OSC)).poly == P("p0 + " + OSC)
    gamma = FrameConnection.constant([3], 1)
    assert star_hamiltonian(frame_hamiltonian(gamma)).poly == P("p0 + 3*p1")
    with pytest.raises(ValueError):
        star_hamiltonian(on_tq("q1"))


def test_hamiltonian_connection_examples():
    assert hamiltonian_connection(on_vq(OSC)) == field("1", ["p1"], ["-q1"])
    assert hamiltonian_connection(on_vq("p1")) == field("1", ["1"], ["0"])
    assert hamiltonian_connection(on_vq("0")) == field("1", ["0"], ["0"])


def test_classical_evolution_examples():
    H = on_vq(OSC)
    assert classical_evolution(on_vq("q1"), H).poly == P("p1")
    assert classical_evolution(on_vq("t"), H).poly == 1
    assert classical_evolution(H, H).poly.is_zero()
    with pytest.raises(ValueError):
        classical_evolution(on_tq("q1"), H)


def test_evolution_identity_examples():
    assert evolution_identity_defect(on_vq("q1"), on_vq("0.5*p1^2")).poly.is_zero()
    assert evolution_identity_defect(on_vq("t"), on_vq("q1^3*p1 + t")).poly.is_zero()


def test_evolution_identity_random_pairs():
    rng = random.Random(20240601)
    for i in range(200):
        m = 1 + i % 2
        f = PhaseFunction(random_polynomial(rng, m, 4, complex_coeffs=True))
        H = PhaseFunction(random_polynomial(rng, m, 4))
        assert evolution_identity_defect(f, H).poly.is_zero()


def test_frame_split_examples():
    H = on_vq("0.5*p1^2")
    assert frame_split(H, FrameConnection.rest(1)).poly == H.poly
    assert frame_split(H, FrameConnection.constant([2], 1)).poly == P("0.5*p1^2 - 2*p1")
    frame = FrameConnection((P("q1*t + 1"),))
    assert frame_split(frame_hamiltonian(frame), frame).poly.is_zero()


def test_frame_connection_rejects_momenta():
    with pytest.raises(ValueError):
        FrameConnection((P("p1"),))


def test_canonical_lift_of_constant_frame_is_translation():
    lifted = canonical_lift(FrameConnection.constant([5], 1))
    assert lifted == field("1", ["5"], ["0"])


@pytest.mark.parametrize(
    "text, dim, expected",
    [("q1^2*p1 + t", 1, True), ("p1*p2", 2, False), ("p1^2 + p1", 1, False), ("t*q1", 1, True)],
)
def test_is_vertical_affine(text, dim, expected):
    assert is_vertical_affine(on_vq(text, dim)) is expected
    assert is_vertical_affine(on_tq("p0", 1)) is False


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        bracket_v(on_vq("q1", 1), PhaseFunction(Polynomial.variable("q1", 2)))
