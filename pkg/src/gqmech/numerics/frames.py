"""Constant-velocity reference frames acting on grid states.

A frame moving with velocity ``v`` has coordinates ``q' = q - v t``. A state
is carried into it by resampling on the shifted grid and multiplying by the
boost phase ``exp(-i v.q' - i |v|^2 t / 2)``, so position expectations shift
by ``-v t`` and momentum expectations by ``-v``. The coordinate map has unit
Jacobian, so the half-density weight is trivial.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.ndimage import map_coordinates

from ..poisson import FrameConnection, PhaseFunction, Space, frame_split
from ..quantizer import schrodinger_quantize
from ..symbolic import Polynomial
from .evolution import CrankNicolson
from .grid import GridError, GridState
from .stencils import expectation

__all__ = [
    "Direction",
    "MovingFrame",
    "SupportOverflowError",
    "frame_transform_grid",
    "moving_frame_hamiltonian",
    "FrameComparison",
    "compare_frames",
]

OVERFLOW_LIMIT = 1e-12


class SupportOverflowError(GridError):
    def __init__(self, lost: float):
        self.lost = lost
        super().__init__(
            f"transformed state leaves the box: mass fraction {lost:.3e} outside "
            f"(limit {OVERFLOW_LIMIT:.0e})"
        )


class Direction(enum.Enum):
    TO_MOVING = "toMoving"
    TO_REST = "toRest"


def _exact(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class MovingFrame:
    """Frame moving with constant velocity ``velocity`` (one entry per axis)."""

    velocity: tuple[Fraction, ...]

    def __post_init__(self):
        vel = tuple(_exact(v) for v in np.atleast_1d(np.asarray(self.velocity, dtype=object)))
        if not vel:
            raise ValueError("velocity needs at least one component")
        object.__setattr__(self, "velocity", vel)

    @property
    def dim(self) -> int:
        return len(self.velocity)

    @property
    def v(self) -> np.ndarray:
        return np.array([float(x) for x in self.velocity])

    def connection(self) -> FrameConnection:
        return FrameConnection.constant(self.velocity, self.dim)

    def is_rest(self) -> bool:
        return not any(self.velocity)


def frame_transform_grid(s: GridState, frame: MovingFrame, direction: Direction) -> GridState:
    """Express ``s`` in the moving frame (``TO_MOVING``) or back (``TO_REST``).

    Values are resampled with cubic-spline interpolation onto the same
    grid. Raises :class:`SupportOverflowError` if more than a ``1e-12``
    fraction of the mass would fall outside the box.
    """
    spec = s.spec
    if frame.dim != spec.dim:
        raise ValueError("frame and grid dimensions differ")
    direction = Direction(direction)
    if frame.is_rest():
        return s
    v = frame.v
    shift = v * s.t
    sign = 1.0 if direction is Direction.TO_MOVING else -1.0
    # target node x reads the source at x + sign * shift
    mass = np.abs(s.values) ** 2
    total = mass.sum()
    kept = np.ones(spec.points, dtype=bool)
    for k, q in enumerate(spec.mesh()):
        lo = spec.lower[k] + sign * shift[k]
        hi = spec.upper[k] + sign * shift[k]
        kept &= (q >= lo - 1e-12) & (q <= hi + 1e-12)
    lost = float(mass[~kept].sum() / total) if total > 0 else 0.0
    if lost > OVERFLOW_LIMIT:
        raise SupportOverflowError(lost)

    mesh = spec.mesh()
    coords = np.array(
        [
            (mesh[k] + sign * shift[k] - spec.lower[k]) / spec.spacing[k]
            for k in range(spec.dim)
        ]
    )
    re = map_coordinates(s.values.real, coords, order=3, mode="constant", cval=0.0)
    im = map_coordinates(s.values.imag, coords, order=3, mode="constant", cval=0.0)
    sampled = re + 1j * im
    vv = float(v @ v)
    if direction is Direction.TO_MOVING:
        phase = -sum(v[k] * mesh[k] for k in range(spec.dim)) - 0.5 * vv * s.t
    else:
        phase = sum(v[k] * (mesh[k] - shift[k]) for k in range(spec.dim)) + 0.5 * vv * s.t
    return s.with_values(sampled * np.exp(1j * phase))


def moving_frame_hamiltonian(H: PhaseFunction, frame: MovingFrame) -> PhaseFunction:
    """Hamiltonian generating the evolution of transformed states.

    It is the frame energy ``H - p.v`` written in moving coordinates
    (``q -> q' + v t``) and boosted momenta (``p -> p' + v``), plus the
    constant ``|v|^2 / 2`` from the time-dependent part of the boost phase.
    """
    if H.space is not Space.VQ:
        raise ValueError("Hamiltonian must be a function on V*Q")
    m = H.dim
    if frame.dim != m:
        raise ValueError("frame and Hamiltonian dimensions differ")
    energy = frame_split(H, frame.connection()).poly
    t = Polynomial.variable("t", m)
    subs = {}
    for k, vk in enumerate(frame.velocity, start=1):
        subs[f"q{k}"] = Polynomial.variable(f"q{k}", m) + t.scale(vk)
        subs[f"p{k}"] = Polynomial.variable(f"p{k}", m) + vk
    shifted = energy.substitute_affine(subs)
    half_v2 = sum((vk * vk for vk in frame.velocity), Fraction(0)) / 2
    return PhaseFunction(shifted + half_v2, Space.VQ)


@dataclass(frozen=True)
class FrameComparison:
    """Expectation traces from the two routes into the moving frame.

    ``rest_*``: evolve in the rest frame, then transform. ``moving_*``:
    transform the initial state, then evolve with the moving-frame
    Hamiltonian. Arrays have shape ``(samples, m)``.
    """

    times: np.ndarray
    rest_q: np.ndarray
    rest_p: np.ndarray
    moving_q: np.ndarray
    moving_p: np.ndarray

    @property
    def max_dq(self) -> float:
        return float(np.max(np.abs(self.rest_q - self.moving_q)))

    @property
    def max_dp(self) -> float:
        return float(np.max(np.abs(self.rest_p - self.moving_p)))


def _qp_expectations(s: GridState, q_ops, p_ops):
    return (
        [expectation(op, s).real for op in q_ops],
        [expectation(op, s).real for op in p_ops],
    )


def compare_frames(
    H: PhaseFunction,
    initial: GridState,
    frame: MovingFrame,
    sizes: list[float],
    sample_every: int = 1,
) -> FrameComparison:
    """Run both routes over the step sizes ``sizes`` and record ``<q>``, ``<p>``."""
    m = H.dim
    spec = initial.spec
    q_ops = [schrodinger_quantize(PhaseFunction(Polynomial.variable(f"q{k}", m))) for k in range(1, m + 1)]
    p_ops = [schrodinger_quantize(PhaseFunction(Polynomial.variable(f"p{k}", m))) for k in range(1, m + 1)]
    rest = CrankNicolson(H, spec)
    moving = CrankNicolson(moving_frame_hamiltonian(H, frame), spec)
    a = initial
    b = frame_transform_grid(initial, frame, Direction.TO_MOVING)
    times, rq, rp, mq, mp = [], [], [], [], []

    def record(a_state, b_state):
        qa, pa = _qp_expectations(frame_transform_grid(a_state, frame, Direction.TO_MOVING), q_ops, p_ops)
        qb, pb = _qp_expectations(b_state, q_ops, p_ops)
        times.append(a_state.t)
        rq.append(qa)
        rp.append(pa)
        mq.append(qb)
        mp.append(pb)

    record(a, b)
    for i, dt in enumerate(sizes, start=1):
        a = rest.step(a, dt)
        b = moving.step(b, dt)
        if i % sample_every == 0 or i == len(sizes):
            record(a, b)
    return FrameComparison(
        np.array(times), np.array(rq), np.array(rp), np.array(mq), np.array(mp)
    )
