"""Classical structures on the vertical and full cotangent bundles.

Phase functions are polynomials tagged with the space they live on: the
vertical cotangent bundle ``V*Q`` (coordinates ``t, q^k, p_k``) or the full
cotangent bundle ``T*Q`` (adds ``p0``, conjugate to ``t``). Pulling a
``V*Q`` function back along the fibration ``T*Q -> V*Q`` changes only the tag.

Conventions: ``{f, g} = df/dp dg/dq - df/dq dg/dp`` so that ``{p, q} = 1``,
and the Hamiltonian vector field of ``f`` acts as ``X_f(g) = {f, g}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .symbolic import Polynomial

__all__ = [
    "Space",
    "PhaseFunction",
    "VectorFieldCoeffs",
    "FrameConnection",
    "on_vq",
    "on_tq",
    "lift",
    "bracket_v",
    "bracket_t",
    "hamiltonian_vector_field_t",
    "star_hamiltonian",
    "hamiltonian_connection",
    "classical_evolution",
    "evolution_identity_defect",
    "frame_hamiltonian",
    "frame_split",
    "canonical_lift",
    "is_vertical_affine",
]


class Space(enum.Enum):
    VQ = "V*Q"
    TQ = "T*Q"


@dataclass(frozen=True)
class PhaseFunction:
    poly: Polynomial
    space: Space = Space.VQ

    def __post_init__(self):
        if self.space is Space.VQ and self.poly.depends_on("p0"):
            raise ValueError(f"function on V*Q may not depend on p0: {self.poly}")

    @property
    def dim(self) -> int:
        return self.poly.dim

    def __str__(self):
        return str(self.poly)


def on_vq(f: Polynomial | str, dim: int | None = None) -> PhaseFunction:
    """Tag a polynomial (or parse an expression) as a function on V*Q."""
    if isinstance(f, str):
        f = Polynomial.parse(f, dim or 1)
    return PhaseFunction(f, Space.VQ)


def on_tq(f: Polynomial | str, dim: int | None = None) -> PhaseFunction:
    if isinstance(f, str):
        f = Polynomial.parse(f, dim or 1)
    return PhaseFunction(f, Space.TQ)


def lift(f: PhaseFunction) -> PhaseFunction:
    """Pullback to T*Q; the coordinate data is unchanged."""
    return f if f.space is Space.TQ else PhaseFunction(f.poly, Space.TQ)


def _check_dims(*fs: PhaseFunction) -> int:
    dims = {f.dim for f in fs}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def _bracket(f: Polynomial, g: Polynomial, pairs) -> Polynomial:
    out = Polynomial.zero(f.dim)
    for q, p in pairs:
        dpf = f.diff(p)
        dqg = g.diff(q) if dpf else None
        if dpf and dqg:
            out = out + dpf * dqg
        dqf = f.diff(q)
        dpg = g.diff(p) if dqf else None
        if dqf and dpg:
            out = out - dqf * dpg
    return out


def _pairs_v(m: int):
    return [(k, m + 1 + k) for k in range(1, m + 1)]


def _pairs_t(m: int):
    return [(0, m + 1)] + _pairs_v(m)


def bracket_v(f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """Canonical Poisson bracket on V*Q (no time direction)."""
    if f.space is not Space.VQ or g.space is not Space.VQ:
        raise ValueError("bracket_v requires two functions on V*Q")
    m = _check_dims(f, g)
    return PhaseFunction(_bracket(f.poly, g.poly, _pairs_v(m)), Space.VQ)


def bracket_t(f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """Canonical Poisson bracket on T*Q; V*Q arguments are lifted first."""
    m = _check_dims(f, g)
    return PhaseFunction(_bracket(f.poly, g.poly, _pairs_t(m)), Space.TQ)


@dataclass(frozen=True)
class VectorFieldCoeffs:
    """Components of a vector field on phase space.

    ``d_p0`` is ``None`` for fields on V*Q, which has no ``p0`` direction.
    """

    d_t: Polynomial
    d_q: tuple[Polynomial, ...]
    d_p: tuple[Polynomial, ...]
    d_p0: Polynomial | None = None

    def __post_init__(self):
        m = self.d_t.dim
        if len(self.d_q) != m or len(self.d_p) != m:
            raise ValueError(f"expected {m} q- and p-components")

    @property
    def dim(self) -> int:
        return self.d_t.dim

    def apply(self, g: Polynomial) -> Polynomial:
        """Derivative of ``g`` along the field."""
        m = self.dim
        out = self.d_t * g.diff(0)
        for k in range(1, m + 1):
            out = out + self.d_q[k - 1] * g.diff(k) + self.d_p[k - 1] * g.diff(m + 1 + k)
        if self.d_p0 is not None:
            out = out + self.d_p0 * g.diff(m + 1)
        return out

    def __eq__(self, other):
        if not isinstance(other, VectorFieldCoeffs):
            return NotImplemented
        zero = Polynomial.zero(self.dim)
        mine = self.d_p0 if self.d_p0 is not None else zero
        theirs = other.d_p0 if other.d_p0 is not None else zero
        return (
            self.d_t == other.d_t
            and self.d_q == other.d_q
            and self.d_p == other.d_p
            and mine == theirs
        )

    __hash__ = None


def hamiltonian_vector_field_t(f: PhaseFunction) -> VectorFieldCoeffs:
    """Hamiltonian vector field of ``f`` with respect to the T*Q structure."""
    p = f.poly
    m = p.dim
    return VectorFieldCoeffs(
        d_t=p.diff(m + 1),
        d_q=tuple(p.diff(m + 1 + k) for k in range(1, m + 1)),
        d_p=tuple(-p.diff(k) for k in range(1, m + 1)),
        d_p0=-p.diff(0),
    )


def _require_vq(H: PhaseFunction, what: str = "H") -> None:
    if H.space is not Space.VQ:
        raise ValueError(f"{what} must be a function on V*Q")


def star_hamiltonian(H: PhaseFunction) -> PhaseFunction:
    """``p0 + H`` on T*Q, whose Hamiltonian flow drives the evolution."""
    _require_vq(H)
    return PhaseFunction(H.poly + Polynomial.variable("p0", H.dim), Space.TQ)


def hamiltonian_connection(H: PhaseFunction) -> VectorFieldCoeffs:
    """``d/dt + dH/dp d/dq - dH/dq d/dp`` on V*Q; its integral curves solve Hamilton's equations."""
    _require_vq(H)
    p = H.poly
    m = p.dim
    return VectorFieldCoeffs(
        d_t=Polynomial.constant(1, m),
        d_q=tuple(p.diff(m + 1 + k) for k in range(1, m + 1)),
        d_p=tuple(-p.diff(k) for k in range(1, m + 1)),
    )


def classical_evolution(f: PhaseFunction, H: PhaseFunction) -> PhaseFunction:
    """Lie derivative of ``f`` along the Hamiltonian connection of ``H``."""
    _require_vq(f, "f")
    _require_vq(H)
    _check_dims(f, H)
    return PhaseFunction(hamiltonian_connection(H).apply(f.poly), Space.VQ)


def evolution_identity_defect(f: PhaseFunction, H: PhaseFunction) -> PhaseFunction:
    """Pulled-back classical evolution of ``f`` minus ``{p0 + H, f}`` on T*Q.

    Identically zero for every pair; returned so callers can check it.
    """
    lhs = lift(classical_evolution(f, H))
    rhs = bracket_t(star_hamiltonian(H), lift(f))
    return PhaseFunction(lhs.poly - rhs.poly, Space.TQ)


@dataclass(frozen=True)
class FrameConnection:
    """Velocity field ``gamma[k](t, q)`` of a reference frame ``d/dt + gamma^k d/dq^k``."""

    gamma: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.gamma:
            raise ValueError("frame connection needs at least one component")
        m = self.gamma[0].dim
        if len(self.gamma) != m:
            raise ValueError(f"expected {m} components, got {len(self.gamma)}")
        for k, g in enumerate(self.gamma, start=1):
            if g.dim != m:
                raise ValueError("frame components must share one dimension")
            if g.momentum_degree() > 0:
                raise ValueError(f"frame component {k} depends on momenta: {g}")

    @property
    def dim(self) -> int:
        return self.gamma[0].dim

    @classmethod
    def constant(cls, velocity, dim: int) -> "FrameConnection":
        return cls(tuple(Polynomial.constant(v, dim) for v in velocity))

    @classmethod
    def rest(cls, dim: int) -> "FrameConnection":
        return cls((Polynomial.zero(dim),) * dim)


def frame_hamiltonian(frame: FrameConnection) -> PhaseFunction:
    """``p_k gamma^k``, the Hamiltonian whose flow is the frame itself."""
    m = frame.dim
    out = Polynomial.zero(m)
    for k, g in enumerate(frame.gamma, start=1):
        out = out + Polynomial.variable(m + 1 + k, m) * g
    return PhaseFunction(out, Space.VQ)


def frame_split(H: PhaseFunction, frame: FrameConnection) -> PhaseFunction:
    """Energy function relative to ``frame``: ``H - p_k gamma^k``."""
    _require_vq(H)
    _check_dims(H, PhaseFunction(frame.gamma[0]))
    return PhaseFunction(H.poly - frame_hamiltonian(frame).poly, Space.VQ)


def canonical_lift(frame: FrameConnection) -> VectorFieldCoeffs:
    """Lift of the frame to V*Q: ``d/dt + G^i d_i - p_i d_j G^i d^j``."""
    return hamiltonian_connection(frame_hamiltonian(frame))


def is_vertical_affine(f: PhaseFunction) -> bool:
    """True when ``f`` is free of ``p0`` and of total degree <= 1 in ``p1..pm``."""
    if f.poly.depends_on("p0"):
        return False
    return f.poly.momentum_degree(include_p0=False) <= 1
