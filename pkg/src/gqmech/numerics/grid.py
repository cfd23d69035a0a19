"""Half-densities sampled on uniform box grids in the fibre coordinates."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import erfc, pi, prod

import numpy as np

__all__ = [
    "GridError",
    "PacketOutsideBoxError",
    "GridSpec",
    "GridState",
    "inner_product",
    "norm_squared",
    "gaussian_packet",
    "packet_tail_mass",
    "TAIL_MASS_LIMIT",
]

TAIL_MASS_LIMIT = 1e-12


class GridError(ValueError):
    pass


class PacketOutsideBoxError(GridError):
    def __init__(self, tail: float, limit: float = TAIL_MASS_LIMIT):
        self.tail = tail
        super().__init__(f"packet tail mass outside the box is {tail:.3e} (limit {limit:.0e})")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on a box in ``q``; node ``j`` of axis ``k`` sits at ``lower + j * spacing``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    points: tuple[int, ...]

    def __post_init__(self):
        lower = tuple(float(x) for x in self.lower)
        upper = tuple(float(x) for x in self.upper)
        points = tuple(int(n) for n in self.points)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "points", points)
        if not (len(lower) == len(upper) == len(points)):
            raise GridError("lower, upper and points must have the same length")
        if len(points) not in (1, 2):
            raise GridError(f"grid dimension must be 1 or 2, got {len(points)}")
        for k, (lo, hi, n) in enumerate(zip(lower, upper, points), start=1):
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
                raise GridError(f"axis {k}: need finite bounds with lower < upper")
            if n < 8:
                raise GridError(f"axis {k}: need at least 8 points, got {n}")

    @classmethod
    def uniform(cls, dim: int, lower: float, upper: float, points: int) -> "GridSpec":
        return cls((lower,) * dim, (upper,) * dim, (points,) * dim)

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((hi - lo) / (n - 1) for lo, hi, n in zip(self.lower, self.upper, self.points))

    @property
    def size(self) -> int:
        return prod(self.points)

    @property
    def cell_volume(self) -> float:
        return prod(self.spacing)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, n) for lo, hi, n in zip(self.lower, self.upper, self.points)]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")


@dataclass(frozen=True, eq=False)
class GridState:
    """Complex half-density values at the grid nodes at time ``t``.

    ``values`` has shape ``spec.points`` and is stored read-only.
    """

    values: np.ndarray
    t: float
    spec: GridSpec = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.size != self.spec.size:
            raise GridError(f"expected {self.spec.size} values, got {vals.size}")
        vals = vals.reshape(self.spec.points)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "t", float(self.t))

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def with_values(self, values: np.ndarray, t: float | None = None) -> "GridState":
        return GridState(values, self.t if t is None else t, self.spec)


def _check_pair(a: GridState, b: GridState) -> None:
    if a.spec != b.spec:
        raise GridError("states live on different grids")
    if a.t != b.t:
        raise GridError(f"states live at different times ({a.t} vs {b.t})")


def inner_product(a: GridState, b: GridState) -> complex:
    """``(2 pi)^-m * sum(a * conj(b)) * cell volume``; linear in ``a``, conjugate-linear in ``b``."""
    _check_pair(a, b)
    m = a.spec.dim
    return complex(np.vdot(b.values, a.values)) * a.spec.cell_volume / (2 * pi) ** m


def norm_squared(s: GridState) -> float:
    m = s.spec.dim
    return float(np.vdot(s.values, s.values).real) * s.spec.cell_volume / (2 * pi) ** m


def packet_tail_mass(spec: GridSpec, q0, width) -> float:
    """Probability of the Gaussian ``|rho|^2`` lying outside the box."""
    inside = 1.0
    for lo, hi, c, w in zip(spec.lower, spec.upper, q0, width):
        tail = 0.5 * erfc((c - lo) / w) + 0.5 * erfc((hi - c) / w)
        inside *= max(0.0, 1.0 - tail)
    return 1.0 - inside


def gaussian_packet(spec: GridSpec, q0, p0, width, t: float = 0.0) -> GridState:
    """Gaussian half-density ``prod_k (pi s_k^2)^(-1/4) exp(-(q-q0)^2/(2 s_k^2) + i p0 q)``.

    The profile is rescaled so that ``inner_product(rho, rho) == 1`` on the
    grid, absorbing the ``(2 pi)^m`` of the Hermitian form.
    """
    m = spec.dim
    q0 = np.broadcast_to(np.asarray(q0, dtype=float), (m,))
    p0 = np.broadcast_to(np.asarray(p0, dtype=float), (m,))
    width = np.broadcast_to(np.asarray(width, dtype=float), (m,))
    if np.any(width <= 0) or not np.all(np.isfinite(width)):
        raise GridError(f"packet widths must be positive, got {width.tolist()}")
    tail = packet_tail_mass(spec, q0, width)
    if tail > TAIL_MASS_LIMIT:
        raise PacketOutsideBoxError(tail)
    values = np.ones(spec.points, dtype=complex) * (2 * pi) ** (m / 2)
    for k, q in enumerate(spec.mesh()):
        s = width[k]
        values = values * (pi * s * s) ** -0.25 * np.exp(
            -((q - q0[k]) ** 2) / (2 * s * s) + 1j * p0[k] * q
        )
    state = GridState(values, t, spec)
    return state.with_values(values / np.sqrt(norm_squared(state)))
