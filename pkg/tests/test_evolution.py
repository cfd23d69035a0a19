import math

import numpy as np
import pytest
from scipy.sparse.linalg import expm_multiply

from gqmech.numerics import (
    ClassicalState,
    CrankNicolson,
    GridSpec,
    GridState,
    HamiltonFlow,
    SolverError,
    classical_step_rk4,
    crank_nicolson_step,
    expectation,
    gaussian_packet,
    hamiltonian_matrix,
    norm_squared,
    step_sizes,
)
from gqmech.poisson import on_vq
from gqmech.quantizer import QuantizationError, quantize

SPEC = GridSpec.uniform(1, -12, 12, 1024)
OSC = on_vq("0.5*p1^2 + 0.5*q1^2")


def test_zero_hamiltonian_leaves_state_unchanged():
    s = gaussian_packet(SPEC, 1.0, 0.5, 0.7)
    out = crank_nicolson_step(on_vq("0"), s, 0.01)
    np.testing.assert_allclose(out.values, s.values, rtol=0, atol=1e-15)
    assert out.t == pytest.approx(0.01)


def test_norm_drift_per_step():
    cn = CrankNicolson(OSC, SPEC)
    s = gaussian_packet(SPEC, 1.0, 0.0, 0.7)
    n0 = norm_squared(s)
    for _ in range(50):
        s = cn.step(s, 1e-3)
        assert abs(norm_squared(s) - n0) < 1e-10


def test_free_step_local_error_is_third_order():
    H = on_vq("0.5*p1^2")
    s = gaussian_packet(SPEC, 0.0, 1.5, 1.0)
    M = hamiltonian_matrix(H, SPEC, 0.0)
    errors = []
    for dt in (0.04, 0.02, 0.01):
        exact = expm_multiply(-1j * dt * M, s.flat)
        got = crank_nicolson_step(H, s, dt).flat
        errors.append(np.sqrt(norm_squared(s.with_values(got - exact))))
    assert errors[0] / errors[1] == pytest.approx(8, rel=0.05)
    assert errors[1] / errors[2] == pytest.approx(8, rel=0.05)


def test_time_dependent_hamiltonian_is_second_order():
    # constant force ramping up in time; reference from a much finer step
    H = on_vq("0.5*p1^2 + 0.5*t*q1")
    spec = GridSpec.uniform(1, -12, 12, 512)
    s0 = gaussian_packet(spec, 0.0, 0.0, 1.0)

    def run(dt, steps):
        cn = CrankNicolson(H, spec)
        s = s0
        for _ in range(steps):
            s = cn.step(s, dt)
        return s

    ref = run(0.0025, 400)
    errs = []
    for dt, n in ((0.02, 50), (0.01, 100)):
        s = run(dt, n)
        errs.append(np.sqrt(norm_squared(ref.with_values(s.values - ref.values))))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.1)


def test_solver_rejects_bad_input():
    with pytest.raises(QuantizationError):
        CrankNicolson(on_vq("p1^3"), SPEC)
    s = gaussian_packet(SPEC, 0, 0, 1)
    with pytest.raises(ValueError):
        crank_nicolson_step(OSC, s, 0.0)
    with pytest.raises(SolverError) as info:
        CrankNicolson(OSC, SPEC, tol=-1.0).step(s, 1e-3)
    assert info.value.step == 0


def test_step_sizes():
    assert step_sizes(1.0, 0.25) == [0.25] * 4
    sizes = step_sizes(2 * math.pi, 1e-3)
    assert len(sizes) == 6284 and sum(sizes) == pytest.approx(2 * math.pi, abs=1e-12)
    with pytest.raises(ValueError):
        step_sizes(1.0, 0.0)


def test_rk4_oscillator_period():
    flow = HamiltonFlow(OSC)
    s = ClassicalState(0.0, (1.0,), (0.0,))
    for s in flow.run(s, step_sizes(2 * math.pi, 1e-3)):
        pass
    assert s.q[0] == pytest.approx(1.0, abs=1e-8)
    assert s.p[0] == pytest.approx(0.0, abs=1e-8)
    assert s.t == pytest.approx(2 * math.pi)


def test_rk4_is_exact_on_drift_and_trivial_on_zero():
    s = ClassicalState(0.0, (0.3,), (0.2,))
    out = classical_step_rk4(on_vq("p1"), s, 0.1)
    assert out.q == (0.3 + 0.1,) and out.p == (0.2,)
    assert classical_step_rk4(on_vq("0"), s, 0.1).q == s.q
    with pytest.raises(ValueError):
        classical_step_rk4(on_vq("p1*p2", 2), s, 0.1)


def test_rk4_two_dimensional_rotation():
    H = on_vq("0.5*p1^2 + 0.5*p2^2 + 0.5*q1^2 + 2*q2^2", 2)
    s = ClassicalState(0.0, (1.0, 0.5), (0.0, 0.0))
    for s in HamiltonFlow(H).run(s, step_sizes(2 * math.pi, 1e-3)):
        pass
    assert s.q == pytest.approx((1.0, 0.5), abs=1e-8)


def test_packet_centre_follows_free_motion():
    H = on_vq("0.5*p1^2")
    spec = GridSpec.uniform(1, -12, 12, 2048)
    s = gaussian_packet(spec, -2.0, 1.0, 1.0)
    for s in CrankNicolson(H, spec).run(s, [0.01] * 200):
        pass
    assert expectation(quantize(on_vq("q1")), s).real == pytest.approx(0.0, abs=1e-3)
    assert isinstance(s, GridState)
