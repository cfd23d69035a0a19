import random

import numpy as np
import pytest

from gqmech.numerics import (
    GridSpec,
    GridState,
    OperatorError,
    apply_operator,
    expectation,
    gaussian_packet,
    hamiltonian_matrix,
    inner_product,
)
from gqmech.poisson import PhaseFunction, on_tq, on_vq
from gqmech.quantizer import DiffOperator, VarSet, prequantize_v, quantize
from gqmech.symbolic import random_vertical_affine

SPEC = GridSpec.uniform(1, -12, 12, 1024)


def windowed_wave(spec, k):
    q = spec.mesh()[0]
    return GridState(np.exp(1j * k * q) * np.exp(-(q**2) / 8), 0.0, spec)


def test_multiplication_and_identity():
    s = gaussian_packet(SPEC, 1.0, 0.5, 0.7)
    q = SPEC.mesh()[0]
    np.testing.assert_allclose(apply_operator(quantize(on_vq("q1")), s).values, q * s.values)
    np.testing.assert_array_equal(apply_operator(DiffOperator.identity(VarSet.CONFIG, 1), s).values, s.values)


def test_momentum_on_plane_wave_is_second_order():
    k = 1.5
    errors = []
    for n in (512, 1024, 2048):
        spec = GridSpec.uniform(1, -12, 12, n)
        s = windowed_wave(spec, k)
        q = spec.mesh()[0]
        exact = (k + 1j * q / 4) * s.values  # -i d/dq of the windowed wave
        got = apply_operator(quantize(on_vq("p1")), s).values
        interior = slice(n // 8, -n // 8)
        errors.append(np.max(np.abs(got - exact)[interior]))
    assert errors[0] / errors[1] == pytest.approx(4, rel=0.05)
    assert errors[1] / errors[2] == pytest.approx(4, rel=0.05)


def test_expectation_examples():
    s = gaussian_packet(SPEC, 1.0, 0.0, 0.7)
    assert expectation(DiffOperator.identity(VarSet.CONFIG, 1), s) == pytest.approx(1.0, abs=1e-14)
    assert expectation(quantize(on_vq("q1")), s).real == pytest.approx(1.0, abs=1e-8)


def test_real_affine_observables_have_real_expectations():
    rng = random.Random(2)
    for m, spec in ((1, SPEC), (2, GridSpec.uniform(2, -8, 8, 96))):
        s = gaussian_packet(spec, [0.5] * m, [0.7] * m, [0.9] * m, t=0.3)
        for _ in range(10):
            f = PhaseFunction(random_vertical_affine(rng, m, 2))
            value = expectation(quantize(f), s)
            assert abs(value.imag) <= 1e-9 * max(1.0, abs(value))


def test_discrete_self_adjointness():
    rng = random.Random(4)
    a = gaussian_packet(SPEC, 1.0, 0.5, 0.7)
    b = gaussian_packet(SPEC, -0.5, -1.0, 1.1)
    for _ in range(10):
        fhat = quantize(PhaseFunction(random_vertical_affine(rng, 1, 2)))
        gap = abs(inner_product(a, apply_operator(fhat, b)) - inner_product(apply_operator(fhat, a), b))
        h2 = SPEC.spacing[0] ** 2
        print(f"self-adjointness gap {gap:.2e} = {gap / h2:.2e} * dq^2")
        assert gap <= 1e-3 * h2


def test_operator_errors():
    s = gaussian_packet(SPEC, 0, 0, 1)
    with pytest.raises(OperatorError):
        apply_operator(quantize(on_tq("p0")), s)
    with pytest.raises(OperatorError):
        apply_operator(DiffOperator.derivative("q1", VarSet.CONFIG, 1, 3), s)
    with pytest.raises(OperatorError):
        apply_operator(prequantize_v(on_vq("q1")), s)
    with pytest.raises(OperatorError):
        expectation(DiffOperator.identity(VarSet.CONFIG, 1), s.with_values(np.zeros(SPEC.points)))


def test_time_only_observable_is_exact():
    s = gaussian_packet(SPEC, 0, 0, 1, t=0.1234)
    assert expectation(quantize(on_vq("t")), s) == 0.1234
    assert expectation(quantize(on_vq("t^2")), s) == 0.1234**2


@pytest.mark.parametrize(
    "H, dim",
    [
        ("0.5*p1^2 + 0.5*q1^2", 1),
        ("(1 + 0.1*q1^2)*p1^2 + q1*p1 + t*q1", 1),
        ("0.5*p1^2 + 0.5*p2^2 + 0.3*p1*p2 + q2*p1 + q1^2*q2", 2),
        ("(2 + 0.1*q1*q2)*p1*p2 + p1^2 + p2^2", 2),
    ],
)
def test_hamiltonian_matrix_is_hermitian_and_consistent(H, dim):
    spec = SPEC if dim == 1 else GridSpec.uniform(2, -8, 8, 128)
    M = hamiltonian_matrix(on_vq(H, dim), spec, 0.5)
    assert abs(M - M.conj().T).max() < 1e-10
    s = gaussian_packet(spec, [0.3] * dim, [0.4] * dim, [1.0] * dim, t=0.5)
    direct = apply_operator(quantize(on_vq(H, dim)), s)
    diff = np.abs(M @ s.flat - direct.flat).max()
    assert diff < 50 * max(spec.spacing) ** 2
